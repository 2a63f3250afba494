use cfr_core::cfr::exact_values;
use cfr_core::eval::probe_mean_variance;
use cfr_core::game::{Kuhn, Leduc, PlayerId};
use cfr_core::mccfr::{sample_trajectory, BaselineMode, OsConfig, OutcomeSampler};
use cfr_core::rng::{stream_rng, StreamKind};
use cfr_core::strategy::UniformStrategy;
use cfr_core::tables::UniformSampling;

#[test]
#[ignore]
fn oracle_zero_variance_smoke() {
    let g = Kuhn;
    let cfg = OsConfig {
        baseline: BaselineMode::Oracle,
        ..OsConfig::vr_mccfr()
    };
    let mut solver = OutcomeSampler::new(&g, cfg).unwrap();
    // frozen uniform σ (empty regret store reads uniform)
    let report = exact_values(&g, &UniformStrategy, PlayerId::P1);
    solver.set_oracle(PlayerId::P1, report.history);
    let xi = UniformSampling;
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let mut rng = stream_rng(1, StreamKind::Trajectory, k, 0);
        let traj = solver.sample(&xi, &mut rng);
        let mut prng = stream_rng(1, StreamKind::Probe, k, 0);
        if let Some(v) =
            probe_mean_variance(&solver.view(PlayerId::P1), &traj, PlayerId::P1, &xi, 50, &mut prng)
        {
            worst = worst.max(v);
        }
    }
    println!("oracle max mean-variance over 200 trajectories = {worst:e}");
}

#[test]
#[ignore]
fn variance_separation_smoke() {
    // after N training iterations, compare probe variance of mccfr vs vr
    for (name, cfg) in [
        ("mccfr", OsConfig::mccfr()),
        ("vr-sa", OsConfig::vr_mccfr()),
        ("vr-sa-plus", OsConfig::vr_mccfr_plus()),
    ] {
        let g = Leduc;
        let mut solver = OutcomeSampler::new(&g, cfg).unwrap();
        let xi = UniformSampling;
        let iters = 10_000u64;
        for _ in 0..iters {
            let t = solver.begin_iteration();
            for player in PlayerId::BOTH {
                let mut rng = stream_rng(7, StreamKind::Trajectory, t, player.index());
                let traj = solver.sample(&xi, &mut rng);
                solver.update_player(&traj, player).unwrap();
            }
        }
        // probe
        let mut acc = 0.0;
        let mut n = 0;
        for k in 0..100u64 {
            for player in PlayerId::BOTH {
                let mut rng = stream_rng(99, StreamKind::Trajectory, k, player.index());
                let traj = sample_trajectory(
                    &g,
                    &cfr_core::strategy::CurrentStrategy(&solver.regrets),
                    &xi,
                    &mut rng,
                );
                let mut prng = stream_rng(99, StreamKind::Probe, k, player.index());
                if let Some(v) =
                    probe_mean_variance(&solver.view(player), &traj, player, &xi, 100, &mut prng)
                {
                    acc += v;
                    n += 1;
                }
            }
        }
        println!("{name}: mean probe variance after {iters} iters = {:.4}", acc / n as f64);
    }
}

use cfr_core::cfr::exact_values;
use cfr_core::game::{Game, Kuhn, PlayerId};
use cfr_core::mccfr::{compute_pass, sample_trajectory, OsConfig, OutcomeSampler};
use cfr_core::rng::{stream_rng, StreamKind};
use cfr_core::run::{run_solver, Algorithm, RunSettings};
use cfr_core::strategy::UniformStrategy;
use cfr_core::tables::UniformSampling;
use std::collections::HashMap;

#[test]
#[ignore]
fn kuhn_sampled_convergence() {
    for algo in [Algorithm::Mccfr, Algorithm::VrMccfr, Algorithm::VrMccfrPlus] {
        let s = RunSettings::new(algo, 200_000, 3);
        let arts = run_solver(&Kuhn, &s).unwrap();
        let at = |it: u64| {
            arts.records
                .iter()
                .find(|r| r.iteration == it)
                .map(|r| r.exploitability)
                .unwrap_or(f64::NAN)
        };
        println!(
            "kuhn {:?} 1e3={:.5} 1e4={:.5} 1e5={:.5} 2e5={:.5}",
            algo,
            at(1000),
            at(10_000),
            at(100_000),
            at(200_000),
        );
    }
}

#[test]
#[ignore]
fn unbiasedness_smoke() {
    // sample mean of v̂ per (I,a) over many trajectories vs exact values,
    // uniform σ, zero baselines
    let g = Kuhn;
    let solver = OutcomeSampler::new(&g, OsConfig::mccfr()).unwrap();
    let xi = UniformSampling;
    let player = PlayerId::P1;
    let exact = exact_values(&g, &UniformStrategy, player);

    let n = 200_000u64;
    let mut sums: HashMap<String, Vec<f64>> = HashMap::new();
    for t in 0..n {
        let mut rng = stream_rng(5, StreamKind::Trajectory, t, 0);
        let traj = sample_trajectory(&g, &UniformStrategy, &xi, &mut rng);
        let values = compute_pass(&solver.view(player), &traj, player, t).unwrap();
        for (node, nv) in traj.nodes.iter().zip(&values.per_node) {
            if node.actor == player {
                let key = g.info_state_key(&node.history, player);
                let cf = nv.cf_action_values.as_ref().unwrap();
                let e = sums.entry(key.observed.clone()).or_insert_with(|| vec![0.0; cf.len()]);
                for (s, &v) in e.iter_mut().zip(cf) {
                    *s += v;
                }
            }
        }
    }
    let mut worst = 0.0f64;
    for (key, sv) in &exact.state {
        let means = sums
            .get(&key.observed)
            .map(|s| s.iter().map(|&x| x / n as f64).collect::<Vec<_>>())
            .unwrap_or_default();
        for (slot, &va) in sv.action_values.iter().enumerate() {
            let err = (means[slot] - va).abs();
            worst = worst.max(err);
            println!("{}/{slot}: mean={:.5} exact={:.5} err={:.5}", key.observed, means[slot], va, err);
        }
    }
    println!("worst abs error = {worst:.5}");
}

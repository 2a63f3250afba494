use cfr_core::cfr::exact_values;
use cfr_core::game::{enumerate_histories, Game, Leduc, PlayerId};
use cfr_core::mccfr::{sample_trajectory, OsConfig, OutcomeSampler};
use cfr_core::rng::{stream_rng, StreamKind};
use cfr_core::strategy::UniformStrategy;
use cfr_core::tables::UniformSampling;
use std::collections::BTreeMap;

#[test]
#[ignore]
fn baseline_learning_quality() {
    // frozen uniform σ: baselines should approach the infoset-average of
    // u^σ(ha); measure the error per depth
    let g = Leduc;
    let mut solver = OutcomeSampler::new(&g, OsConfig::vr_mccfr()).unwrap();
    let xi = UniformSampling;
    let player = PlayerId::P1;
    let iters = 100_000u64;
    for t in 0..iters {
        solver.begin_iteration();
        // frozen σ: uniform (empty regret store); only update baselines by
        // sampling under uniform
        let mut rng = stream_rng(11, StreamKind::Trajectory, t, 0);
        let traj = sample_trajectory(&g, &UniformStrategy, &xi, &mut rng);
        solver.update_player(&traj, player).unwrap();
        // wipe regrets so σ stays uniform
        solver.regrets = Default::default();
        solver.avg = Default::default();
    }

    let exact = exact_values(&g, &UniformStrategy, player);
    // per augmented key: exact u^σ(ha) per (history, action); group
    let mut spread: BTreeMap<usize, (f64, f64, usize)> = BTreeMap::new(); // depth -> (sum |b−u|, sum |u|, count)
    for h in enumerate_histories(&g) {
        if g.is_terminal(&h) {
            continue;
        }
        let actor = g.current_player(&h);
        let key = g.info_state_key(&h, player);
        let n = g.legal_actions(&h).len();
        for a in 0..n {
            let u = exact.history[&h.apply(a)];
            let b = if actor == PlayerId::Chance {
                solver.baselines[0].value(&key, g.chance_outcome_class(&h, a))
            } else {
                solver.baselines[0].value(&key, a)
            };
            let visited = if actor == PlayerId::Chance {
                solver.baselines[0].visits(&key, g.chance_outcome_class(&h, a))
            } else {
                solver.baselines[0].visits(&key, a)
            };
            if visited == 0 {
                continue;
            }
            let e = spread.entry(h.len()).or_insert((0.0, 0.0, 0));
            e.0 += (b - u).abs();
            e.1 += u.abs();
            e.2 += 1;
        }
    }
    for (depth, (err, mag, cnt)) in spread {
        println!(
            "depth {depth}: mean|b−u|={:.3} mean|u|={:.3} pairs={}",
            err / cnt as f64,
            mag / cnt as f64,
            cnt
        );
    }
}

use cfr_core::eval::{expected_value, exploitability};
use cfr_core::game::{enumerate_histories, Game, Kuhn, Leduc, PlayerId};
use cfr_core::run::{run_solver, Algorithm, RunSettings};
use cfr_core::strategy::UniformStrategy;

#[test]
#[ignore]
fn leduc_shape() {
    let g = Leduc;
    let hists = enumerate_histories(&g);
    let mut keys = std::collections::BTreeSet::new();
    let mut terminals = 0;
    for h in &hists {
        if g.is_terminal(h) {
            terminals += 1;
        } else {
            let p = g.current_player(h);
            if p != PlayerId::Chance {
                keys.insert(g.info_state_key(h, p));
            }
        }
    }
    println!(
        "leduc histories={} terminals={} infosets={}",
        hists.len(),
        terminals,
        keys.len()
    );
    println!(
        "uniform exploitability kuhn={} leduc={}",
        exploitability(&Kuhn, &UniformStrategy).exploitability,
        exploitability(&Leduc, &UniformStrategy).exploitability
    );
}

#[test]
#[ignore]
fn kuhn_cfr_convergence() {
    for algo in [Algorithm::Cfr, Algorithm::CfrPlus] {
        let t0 = std::time::Instant::now();
        let s = RunSettings::new(algo, 10_000, 1);
        let arts = run_solver(&Kuhn, &s).unwrap();
        for r in arts.records.iter().filter(|r| r.iteration.is_power_of_two() || r.iteration % 10_000 == 0 || r.iteration == 1000) {
            println!("kuhn {:?} t={} expl={}", algo, r.iteration, r.exploitability);
        }
        println!("  last={} elapsed={:?}", arts.records.last().unwrap().exploitability, t0.elapsed());
    }
}

#[test]
#[ignore]
fn kuhn_value() {
    // converged game value via long CFR+ run
    use cfr_core::cfr::{cfr_iteration, CfrConfig};
    use cfr_core::strategy::AverageStrategy;
    use cfr_core::tables::{AvgStrategyStore, RegretStore};
    let g = Kuhn;
    let mut regrets = RegretStore::new();
    let mut avg = AvgStrategyStore::new();
    for t in 1..=200_000 {
        cfr_iteration(&g, &mut regrets, &mut avg, t, CfrConfig::plus());
    }
    let prof = AverageStrategy(&avg);
    let v = expected_value(&g, &prof, PlayerId::P1);
    let e = exploitability(&g, &prof);
    println!("kuhn value={} (−1/18={}) expl={}", v, -1.0 / 18.0, e.exploitability);
}

#[test]
#[ignore]
fn leduc_cfr_1e3() {
    for algo in [Algorithm::Cfr, Algorithm::CfrPlus] {
        let t0 = std::time::Instant::now();
        let s = RunSettings::new(algo, 1000, 1);
        let arts = run_solver(&Leduc, &s).unwrap();
        println!(
            "leduc {:?} t=1000 expl={} elapsed={:?}",
            algo,
            arts.records.last().unwrap().exploitability,
            t0.elapsed()
        );
    }
}

#[test]
#[ignore]
fn leduc_sampled_convergence() {
    for algo in [Algorithm::Mccfr, Algorithm::VrMccfr, Algorithm::VrMccfrPlus] {
        let t0 = std::time::Instant::now();
        let s = RunSettings::new(algo, 100_000, 1);
        let arts = run_solver(&Leduc, &s).unwrap();
        let at = |it: u64| {
            arts.records
                .iter()
                .find(|r| r.iteration == it)
                .map(|r| r.exploitability)
                .unwrap_or(f64::NAN)
        };
        println!(
            "leduc {:?} 1e3={:.4} 1e4={:.4} 1e5={:.4} elapsed={:?}",
            algo,
            at(1000),
            at(10_000),
            at(100_000),
            t0.elapsed()
        );
    }
}

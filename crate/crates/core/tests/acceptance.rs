//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use triadic::analysis;
use triadic::census::{classify_triad, full_census, simple_census, structural_census, TriadClass};
use triadic::datasets::{self, biclique};
use triadic::dynamics::{closure_tally, dynamic_closure};
use triadic::instrument::{discriminability, stability, PairedSample};
use triadic::nullmodels::{c_rand, sample, DegreeSequencePair};
use triadic::wedges::{
    binned_cc, census_cc, class_wedge_profile, counts_at, global_cc, global_counts, local_ccs, Category,
    Congruence, Formulation, WedgeScheme,
};
use triadic::{AttendanceRow, BipartiteGraph, Fraction, Result};

type Outcome = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn frac(n: u64, d: u64) -> Fraction {
    Fraction::new(n, d, "").unwrap()
}

fn exact(v: Result<Fraction>, n: u64, d: u64, what: &str) -> Outcome {
    match v {
        Ok(x) if x == frac(n, d) => Ok(()),
        Ok(x) => Err(format!("{what}: got {x}, expected {}", frac(n, d))),
        Err(e) => Err(format!("{what}: {e}")),
    }
}

fn undefined(v: Result<Fraction>, what: &str) -> Outcome {
    match v {
        Err(e) if e.is_undefined() => Ok(()),
        other => Err(format!("{what}: expected undefined, got {other:?}")),
    }
}

/// Library value and oracle `(numer, denom)` agree, including on 0/0.
fn agrees(v: &Result<Fraction>, oracle: Option<(u64, u64)>) -> bool {
    match (v, oracle) {
        (Ok(x), Some(o)) => same_ratio(o, x.numer(), x.denom()),
        (Err(e), None) => e.is_undefined(),
        _ => false,
    }
}

/// Equal values, or both undefined.
fn same(x: &Result<Fraction>, y: &Result<Fraction>) -> bool {
    match (x, y) {
        (Ok(a), Ok(b)) => a == b,
        (Err(a), Err(b)) => a.is_undefined() && b.is_undefined(),
        _ => false,
    }
}

fn test_graphs(count: usize, seed: u64) -> Vec<BipartiteGraph> {
    let mut rng = seeded(seed);
    (0..count).map(|_| small_random_graph(&mut rng)).collect()
}

fn dg2_exactness() -> Outcome {
    let g = datasets::load("dg2").map_err(|e| e.to_string())?;
    let full = full_census(&g).map_err(|e| e.to_string())?;
    let s = simple_census(&full);
    ensure!(s.s == [0, 0, 3, 7], "simple census {s}");
    exact(global_cc(&g, WedgeScheme::classical()), 7, 8, "C(DG2)")?;
    let get = |mu: [u32; 3], w: u32| full.get(&TriadClass::new(mu, w).unwrap());
    ensure!(get([1, 1, 1], 0) == 1, "s_(1,1,1),0 = {}", get([1, 1, 1], 0));
    ensure!(get([2, 1, 1], 0) == 2, "s_(2,1,1),0 = {}", get([2, 1, 1], 0));
    ensure!(get([2, 1, 0], 0) == 3, "s_(2,1,0),0 = {}", get([2, 1, 0], 0));
    let rest = get([1, 0, 0], 1) + get([1, 1, 0], 1);
    ensure!(rest == 4 && full.total() == 10, "remaining triads {rest} of {}", full.total());
    Ok(())
}

fn kites() -> Outcome {
    let expected = [("kite-a", (3, 5), (3, 5)), ("kite-b", (0, 1), (0, 1)), ("kite-c", (5, 8), (3, 5)), ("kite-d", (3, 4), (0, 1))];
    for (name, star, circ) in expected {
        let g = datasets::load(name).map_err(|e| e.to_string())?;
        exact(global_cc(&g, WedgeScheme::opsahl()), star.0, star.1, &format!("C* {name}"))?;
        exact(global_cc(&g, WedgeScheme::exclusive()), circ.0, circ.1, &format!("C° {name}"))?;
    }
    Ok(())
}

fn biclique_counts() -> Outcome {
    for m in 2..=8u64 {
        let g = biclique(3, m as usize);
        let c = global_counts(&g, WedgeScheme::opsahl());
        ensure!(c.wedges == 6 * m * (m - 1), "K_3,{m}: {} wedges", c.wedges);
        if m == 2 {
            ensure!(c.wedges == 12 && c.closed == 0, "K_3,2: {c:?}");
            exact(global_cc(&g, WedgeScheme::opsahl()), 0, 1, "C* K_3,2")?;
        } else {
            ensure!(c.closed == c.wedges, "K_3,{m}: {c:?}");
            exact(global_cc(&g, WedgeScheme::opsahl()), 1, 1, &format!("C* K_3,{m}"))?;
        }
        undefined(global_cc(&g, WedgeScheme::exclusive()), &format!("C° K_3,{m}"))?;
    }
    Ok(())
}

fn alcove_pathology() -> Outcome {
    let g = TriadClass::new([2, 1, 1], 0).unwrap().representative();
    let rate = WedgeScheme::new(Category::Injective, Congruence::None, Formulation::ClosureRate);
    exact(global_cc(&g, rate.with_formulation(Formulation::AlcoveRatio)), 6, 5, "alcove ratio")?;
    exact(global_cc(&g, rate), 1, 1, "closure rate")
}

fn oracle_equivalence() -> Outcome {
    for (n, g) in test_graphs(200, 5).iter().enumerate() {
        let oracle = center_oracle(g);
        for scheme in WedgeScheme::grid() {
            let per_center = &oracle[&(scheme.category, scheme.congruence)];
            let global = global_cc(g, scheme);
            ensure!(
                agrees(&global, sum(per_center).value(scheme.formulation)),
                "graph {n}, {scheme}: global {global:?} vs {:?}",
                sum(per_center)
            );
            for (j, local) in local_ccs(g, scheme).iter().enumerate() {
                ensure!(
                    agrees(local, per_center[j].value(scheme.formulation)),
                    "graph {n}, {scheme}, actor {j}: local {local:?} vs {:?}",
                    per_center[j]
                );
            }
            if scheme.formulation == Formulation::ClosureRate && g.n_actors() >= 3 {
                let census = full_census(g).unwrap();
                let via_census = census_cc(&census, scheme);
                ensure!(
                    same(&via_census, &global),
                    "graph {n}, {scheme}: census {via_census:?} vs global {global:?}"
                );
            }
        }
        let census = full_census(g).unwrap();
        let binned = binned_cc(&structural_census(&census));
        let circ = global_cc(g, WedgeScheme::exclusive());
        ensure!(same(&binned, &circ), "graph {n}: binned {binned:?} vs C° {circ:?}");
    }
    Ok(())
}

fn exclusive_profiles() -> Outcome {
    let allowed = [(0, 0), (2, 0), (0, 6)];
    let mut graphs = test_graphs(200, 6);
    for name in ["dg1", "dg2", "kite-a", "kite-b", "kite-c", "kite-d"] {
        graphs.push(datasets::load(name).unwrap());
    }
    let key = (Category::Induced, Congruence::Structural);
    for (n, g) in graphs.iter().enumerate() {
        let a = g.n_actors();
        for p in 0..a {
            for q in p + 1..a {
                for r in q + 1..a {
                    let mut open_closed = (0, 0);
                    for (i, j, k) in [(p, q, r), (r, q, p), (q, p, r), (r, p, q), (p, r, q), (q, r, p)] {
                        let c = triple_oracle(g, i, j, k)[&key];
                        open_closed.0 += c.wedges - c.closed;
                        open_closed.1 += c.closed;
                    }
                    ensure!(allowed.contains(&open_closed), "graph {n}, triad {p},{q},{r}: {open_closed:?}");
                    let class = classify_triad(g, p, q, r).unwrap();
                    let prof = class_wedge_profile(&class, WedgeScheme::exclusive());
                    ensure!(
                        (prof.open, prof.closed) == open_closed,
                        "graph {n}, class {class}: profile {prof:?} vs {open_closed:?}"
                    );
                }
            }
        }
        if a >= 3 {
            let binned = binned_cc(&structural_census(&full_census(g).unwrap()));
            let circ = global_cc(g, WedgeScheme::exclusive());
            ensure!(same(&binned, &circ), "graph {n}: binned {binned:?} vs {circ:?}");
        }
    }
    Ok(())
}

fn classical_equivalence() -> Outcome {
    let mut graphs = test_graphs(200, 7);
    for name in ["dg1", "dg2", "kite-a", "kite-b", "kite-c", "kite-d"] {
        graphs.push(datasets::load(name).unwrap());
    }
    for (n, g) in graphs.iter().enumerate() {
        let v = global_cc(g, WedgeScheme::classical());
        ensure!(agrees(&v, projection_cc(g)), "graph {n}: {v:?} vs {:?}", projection_cc(g));
    }
    Ok(())
}

fn dynamics() -> Outcome {
    let mut rng = seeded(8);
    for n in 0..100 {
        use rand::seq::SliceRandom;
        use rand::Rng;
        let actors = rng.gen_range(3..=9);
        let events = rng.gen_range(2..=20);
        let mut times: Vec<i64> = (0..events as i64).collect();
        times.shuffle(&mut rng);
        let ids: Vec<String> = (0..actors).map(|a| format!("a{a}")).collect();
        let mut rows = Vec::new();
        for (e, &t) in times.iter().enumerate() {
            let p = rng.gen_range(0..actors);
            let mut q = rng.gen_range(0..actors - 1);
            if q >= p {
                q += 1;
            }
            for x in [p, q] {
                rows.push(AttendanceRow::timed(ids[x].clone(), format!("e{e}"), t));
            }
        }
        let g = BipartiteGraph::with_actors(&ids, rows).unwrap();
        let s = simple_census_oracle(&g);
        let d = dynamic_closure(&g);
        let oracle = (s[2] + s[3] > 0).then_some((s[3], s[2] + s[3]));
        ensure!(agrees(&d, oracle), "instance {n}: D = {d:?}, census {s:?}");
    }
    let g = BipartiteGraph::from_edge_list([
        AttendanceRow::timed("p", "a", 1),
        AttendanceRow::timed("q", "a", 1),
        AttendanceRow::timed("r", "a", 1),
        AttendanceRow::timed("r", "b", 2),
        AttendanceRow::timed("s", "b", 2),
    ])
    .unwrap();
    let t = closure_tally(&g).map_err(|e| e.to_string())?;
    ensure!(t.opened == 2 && t.closed == 0, "simultaneous triangle counted: {t:?}");
    let lone = BipartiteGraph::from_edge_list(["p", "q", "r"].map(|a| AttendanceRow::timed(a, "a", 1))).unwrap();
    undefined(dynamic_closure(&lone), "single simultaneous event")
}

fn instrument_calibration() -> Outcome {
    let split = discriminability(&[0.0, 1.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
    ensure!(split == 1.0, "even split: {split}");
    let constant = discriminability(&[0.42; 9]).unwrap();
    ensure!(constant == 0.0, "constant: {constant}");
    let grid: Vec<f64> = (0..10_000).map(|i| i as f64 / 9_999.0).collect();
    let uniform = discriminability(&grid).unwrap();
    // Four times the variance of the uniform distribution on [0, 1] is 1/3;
    // the even split above pins the scale, so 2/3 is out of reach.
    ensure!((uniform - 1.0 / 3.0).abs() <= 0.01, "uniform grid: {uniform}");
    let p = PairedSample::new((0..10).map(|i| (format!("s{i}"), i as f64 / 10.0, i as f64 / 10.0))).unwrap();
    let st = stability(&p).unwrap();
    ensure!(st == 1.0, "repeated measurements: {st}");
    Ok(())
}

fn null_model() -> Outcome {
    let g = datasets::load("dg1").unwrap();
    let degrees = DegreeSequencePair::of(&g);
    let burn_in = 10 * g.attendance_count() as u64;
    for s in 0..1000 {
        let (h, _) = sample(&g, burn_in, 2024, s);
        ensure!(DegreeSequencePair::of(&h) == degrees, "sample {s}: degrees changed");
        ensure!(h.attendance_count() == g.attendance_count(), "sample {s}: not simple");
    }
    let first = c_rand(&g, WedgeScheme::classical(), 1000, burn_in, 2024).map_err(|e| e.to_string())?;
    let second = c_rand(&g, WedgeScheme::classical(), 1000, burn_in, 2024).map_err(|e| e.to_string())?;
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| c_rand(&g, WedgeScheme::classical(), 1000, burn_in, 2024))
        .map_err(|e| e.to_string())?;
    ensure!(
        first.mean.to_bits() == second.mean.to_bits() && first.mean.to_bits() == single.mean.to_bits(),
        "means differ: {} {} {}",
        first.mean,
        second.mean,
        single.mean
    );
    ensure!(first.mean > 0.0 && first.mean < 1.0, "mean {}", first.mean);
    Ok(())
}

fn invariance() -> Outcome {
    let dg2 = datasets::load("dg2").unwrap();
    let witness = with_duplicate(&dg2, dg2.event("1").unwrap());
    for scheme in [WedgeScheme::classical(), WedgeScheme::exclusive()] {
        ensure!(
            global_cc(&dg2, scheme).unwrap() == global_cc(&witness, scheme).unwrap(),
            "{scheme} changed by duplicating event 1 of DG2"
        );
    }
    let before = global_cc(&dg2, WedgeScheme::opsahl()).unwrap();
    let after = global_cc(&witness, WedgeScheme::opsahl()).unwrap();
    ensure!(before != after, "C* unchanged on the witness ({before})");

    let mut rng = seeded(11);
    for (n, g) in test_graphs(100, 9).iter().enumerate() {
        use rand::Rng;
        if g.n_events() > 0 {
            let dup = with_duplicate(g, rng.gen_range(0..g.n_events()));
            for scheme in [WedgeScheme::classical(), WedgeScheme::exclusive()] {
                let (x, y) = (global_cc(g, scheme), global_cc(&dup, scheme));
                ensure!(same(&x, &y), "graph {n}, {scheme}: {x:?} vs {y:?}");
            }
        }
        let a = g.actor_id(rng.gen_range(0..g.n_actors())).to_string();
        let padded = g
            .with_extra_events(&[("solo", &[a.as_str()][..], None), ("nobody", &[][..], None)])
            .unwrap();
        for scheme in WedgeScheme::grid() {
            let (x, y) = (global_cc(g, scheme), global_cc(&padded, scheme));
            ensure!(same(&x, &y), "graph {n}, {scheme}: singleton event changed {x:?} -> {y:?}");
            let (x, y) = (local_ccs(g, scheme), local_ccs(&padded, scheme));
            ensure!(x.iter().zip(&y).all(|(a, b)| same(a, b)), "graph {n}, {scheme}: singleton event changed local values");
        }
        let (x, y) = (full_census(g).unwrap(), full_census(&padded).unwrap());
        ensure!(x == y, "graph {n}: singleton event changed the census");
        let (x, y) = (analysis::stc_profile(g, u64::MAX), analysis::stc_profile(&padded, u64::MAX));
        ensure!(x == y, "graph {n}: singleton event changed the STC profile");

        for i in 0..g.n_actors() {
            for j in 0..g.n_actors() {
                for k in 0..g.n_actors() {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    for scheme in WedgeScheme::grid() {
                        let (f, b) = (counts_at(g, i, j, k, scheme).unwrap(), counts_at(g, k, j, i, scheme).unwrap());
                        ensure!(f == b, "graph {n}, {scheme}, ({i},{j},{k}): {f:?} vs {b:?}");
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("DG2 exactness", dg2_exactness, Duration::from_secs(1)),
        ("kite examples", kites, Duration::from_secs(1)),
        ("biclique wedge counts", biclique_counts, Duration::from_secs(1)),
        ("alcove-ratio pathology", alcove_pathology, Duration::from_secs(1)),
        ("oracle equivalence, 200 graphs x 18 schemes", oracle_equivalence, Duration::from_secs(120)),
        ("exclusive wedge profiles and binned formula", exclusive_profiles, Duration::MAX),
        ("classical scheme equals projection clustering", classical_equivalence, Duration::MAX),
        ("dynamic closure", dynamics, Duration::MAX),
        ("instrument calibration", instrument_calibration, Duration::MAX),
        ("null-model soundness on DG1", null_model, Duration::MAX),
        ("invariance suite", invariance, Duration::MAX),
    ];
    let mut failed = 0;
    for (n, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed > *budget {
                Err(format!("took {elapsed:?}, budget {budget:?}"))
            } else {
                Ok(())
            }
        });
        match outcome {
            Ok(()) => println!("PASS  criterion {:>2}  {name} ({:.0?})", n + 1, elapsed),
            Err(e) => {
                failed += 1;
                println!("FAIL  criterion {:>2}  {name}: {e}", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

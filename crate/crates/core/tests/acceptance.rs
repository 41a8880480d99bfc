//! Acceptance suite. Prints one PASS/FAIL line per criterion; criterion 10
//! is informational and never fails the run.

use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crossing_maxcut::branching::build_leaf;
use crossing_maxcut::dual::{build_dual, prepare_leaf, pseudo_face_weights};
use crossing_maxcut::gadgets::{eliminate_conflicts, subdivide_edge};
use crossing_maxcut::geometry::{detect_crossings, GeometricDrawing, GeometricEdge, Point};
use crossing_maxcut::matching::solve_bfactor;
use crossing_maxcut::oracle::{
    brute_bfactor, brute_bfactor_bounded, brute_cmc_bounded, brute_mc, random_bfactor_instance, random_drawn_instance,
    suite_instance, RandomConfig,
};
use crossing_maxcut::pipeline::prepare;
use crossing_maxcut::rational::positive_part;
use crossing_maxcut::recovery::verify_solution;
use crossing_maxcut::{solve, CutSolution, DrawnInstance, EdgeId, Error, Rational, SolveOptions, VertexId};

/// Shared tallies for the cross-cutting criteria 8 and 9.
#[derive(Default)]
struct Tally {
    runs: u64,
    bad_branch_counts: u64,
    verification_failures: u64,
    max_dual_degree: usize,
}

impl Tally {
    fn solve(&mut self, d: &DrawnInstance) -> Result<CutSolution, Error> {
        self.runs += 1;
        let out = solve(d, &SolveOptions::default());
        match &out {
            Ok(sol) => {
                if sol.stats.branches != 1 << d.crossing_count() {
                    self.bad_branch_counts += 1;
                }
                if verify_solution(d.graph(), sol).is_err() {
                    self.verification_failures += 1;
                }
            }
            Err(Error::Verification { .. }) => self.verification_failures += 1,
            Err(_) => {}
        }
        out
    }
}

fn report(n: u32, ok: bool, detail: String) -> bool {
    println!("criterion {n:>2}: {}  {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn criterion_1(t: &mut Tally) -> bool {
    let start = Instant::now();
    let mut pass = 0;
    let mut disconnected = 0;
    for seed in 0..300 {
        let d = suite_instance(seed);
        if d.graph().components().len() > 1 {
            disconnected += 1;
        }
        if let Ok(sol) = t.solve(&d) {
            if sol.value == brute_mc(d.graph()).unwrap() {
                pass += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        pass == 300 && secs < 60.0,
        format!("{pass}/300 equal to brute force ({disconnected} disconnected), {secs:.2} s"),
    )
}

fn criterion_2(t: &mut Tally) -> bool {
    let mut pass = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cfg = RandomConfig::new(rng.gen_range(1..=12), 0);
        cfg.component_prob = if seed % 2 == 0 { 0.0 } else { 0.25 };
        let d = random_drawn_instance(1000 + seed, &cfg);
        if let Ok(sol) = t.solve(&d) {
            if d.crossing_count() == 0 && sol.value == brute_mc(d.graph()).unwrap() {
                pass += 1;
            }
        }
    }
    report(2, pass == 100, format!("{pass}/100 planar instances equal to brute force"))
}

fn complete_drawing(points: &[(i64, i64)]) -> DrawnInstance {
    let mut g = GeometricDrawing::default();
    for (i, &(x, y)) in points.iter().enumerate() {
        g.vertices.insert(VertexId(i as u32), Point::from_ints(x, y));
    }
    let n = points.len() as u32;
    for u in 0..n {
        for v in u + 1..n {
            g.edges.push(GeometricEdge {
                id: EdgeId(g.edges.len() as u32),
                u: VertexId(u),
                v: VertexId(v),
                weight: Rational::from_integer(1),
                bends: Vec::new(),
            });
        }
    }
    detect_crossings(&g).unwrap()
}

fn criterion_3(t: &mut Tally) -> bool {
    let k5 = complete_drawing(&[(8, 3), (8, 6), (7, 5), (6, 5), (0, 8)]);
    let k6 = complete_drawing(&[(0, 2), (2, 6), (5, 5), (12, 7), (2, 4), (0, 12)]);
    let a = t.solve(&k5).unwrap();
    let b = t.solve(&k6).unwrap();
    let ok = a.value == Rational::from_integer(6)
        && a.stats.branches == 2
        && b.value == Rational::from_integer(9)
        && b.stats.branches == 8;
    report(
        3,
        ok,
        format!("K5: value {} with {} branches; K6: value {} with {} branches", a.value, a.stats.branches, b.value, b.stats.branches),
    )
}

fn criterion_4() -> bool {
    let mut pass = 0;
    let (mut pos, mut neg) = (0, 0);
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_drawn_instance(2000 + seed, &RandomConfig::new(rng.gen_range(2..=8), rng.gen_range(0..=2)));
        let edges: Vec<EdgeId> = d.graph().edges().map(|(e, _)| e).collect();
        // alternate the sign of the chosen weight when possible
        let want_neg = seed % 2 == 1;
        let pick = edges
            .iter()
            .copied()
            .find(|&e| (d.graph().edge(e).unwrap().weight < Rational::zero()) == want_neg)
            .unwrap_or(edges[rng.gen_range(0..edges.len())]);
        let w = d.graph().edge(pick).unwrap().weight;
        if w < Rational::zero() {
            neg += 1;
        } else {
            pos += 1;
        }
        let t = d.crossings_on(pick);
        let split = [rng.gen_range(0..=t), 0, 0];
        let split = [split[0], t - split[0], 0];
        let (out, offset, _) = subdivide_edge(&d, pick, split).unwrap();
        if offset == positive_part(w * 2) && brute_mc(out.graph()).unwrap() == brute_mc(d.graph()).unwrap() + offset {
            pass += 1;
        }
    }
    report(4, pass == 100, format!("{pass}/100 subdivisions add max(0, 2w) ({pos} with w >= 0, {neg} with w < 0)"))
}

fn criterion_5(t: &mut Tally) -> bool {
    let (mut checked, mut agree, mut infeasible, mut skipped) = (0, 0, 0, 0);
    for seed in 0..300 {
        let d = suite_instance(seed);
        if d.graph().vertex_count() > 8 {
            continue;
        }
        let root = prepare(&d).unwrap().root;
        let k = root.open_crossings().len();
        for mask in 0..1u64 << k {
            let leaf = prepare_leaf(&build_leaf(&root, mask).unwrap()).unwrap();
            if leaf.drawing.graph().edge_count() == 0 {
                continue;
            }
            let dual = build_dual(&leaf).unwrap();
            t.max_dual_degree = t.max_dual_degree.max(dual.max_degree());
            let cmc = match brute_cmc_bounded(leaf.drawing.graph(), &leaf.constraints, 26) {
                Ok(v) => v,
                Err(Error::OracleBound { .. }) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => panic!("{e}"),
            };
            let mb = match brute_bfactor_bounded(&dual, 160) {
                Ok(v) => v,
                Err(Error::OracleBound { .. }) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => panic!("{e}"),
            };
            checked += 1;
            if cmc.is_none() {
                infeasible += 1;
            }
            if cmc == mb {
                agree += 1;
            }
        }
    }
    report(
        5,
        checked > 0 && agree == checked,
        format!("{agree}/{checked} leaves with cmc = mb ({infeasible} infeasible on both sides, {skipped} beyond oracle size)"),
    )
}

fn criterion_6() -> bool {
    let (mut pass, mut with_loops) = (0, 0);
    for seed in 0..100u64 {
        let inst = random_bfactor_instance(3000 + seed, 6, 12);
        if inst.graph.edges().any(|(_, e)| e.is_loop()) {
            with_loops += 1;
        }
        let brute = brute_bfactor(&inst).unwrap();
        let sol = solve_bfactor(&inst).unwrap();
        let ok = match &sol {
            None => brute.is_none(),
            Some(s) => brute == Some(s.cost) && s.matching_weight == s.cost,
        };
        if ok {
            pass += 1;
        }
    }
    report(6, pass == 100, format!("{pass}/100 b-factor instances agree ({with_loops} with loops)"))
}

fn criterion_7() -> bool {
    let (mut pass, mut found, mut seed) = (0, 0, 0u64);
    while found < 50 {
        seed += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cfg = RandomConfig::new(rng.gen_range(3..=6), rng.gen_range(2..=4));
        cfg.one_planar = false;
        cfg.conflict_bias = 0.7;
        let d = random_drawn_instance(4000 + seed, &cfg);
        if d.is_one_planar() {
            continue;
        }
        found += 1;
        let (out, ledger, _) = eliminate_conflicts(&d).unwrap();
        if out.is_one_planar()
            && out.crossing_count() == d.crossing_count()
            && brute_mc(out.graph()).unwrap() - ledger.total() == brute_mc(d.graph()).unwrap()
        {
            pass += 1;
        }
    }
    report(7, pass == 50, format!("{pass}/50 non-1-planar drawings fixed with k and value preserved"))
}

fn criterion_8(t: &Tally) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ident = 0;
    for _ in 0..1000 {
        let a = Rational::new(rng.gen_range(-50..=50), rng.gen_range(1..=12));
        let b = Rational::new(rng.gen_range(-50..=50), rng.gen_range(1..=12));
        let [bc, cd, da, l] = pseudo_face_weights(a, b);
        if da + l == a && cd + l == a + b && bc + l == b && bc + cd + da == Rational::zero() {
            ident += 1;
        }
    }
    let ok = t.bad_branch_counts == 0 && t.max_dual_degree <= 5 && ident == 1000;
    report(
        8,
        ok,
        format!(
            "branches = 2^k on {}/{} runs, max dual degree {}, case identities {ident}/1000",
            t.runs - t.bad_branch_counts,
            t.runs,
            t.max_dual_degree
        ),
    )
}

fn criterion_9(t: &Tally) -> bool {
    report(9, t.verification_failures == 0, format!("{} verification failures over {} solves", t.verification_failures, t.runs))
}

fn criterion_10() -> bool {
    let mut times = Vec::new();
    for k in 1..=10usize {
        let mut cfg = RandomConfig::new(40, k);
        cfg.extra_edges = 30;
        let d = random_drawn_instance(40, &cfg);
        let start = Instant::now();
        let sol = solve(&d, &SolveOptions::default()).unwrap();
        assert_eq!(sol.stats.branches, 1 << k);
        times.push(start.elapsed().as_secs_f64());
    }
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1] / w[0]).collect();
    let mean = (times[9] / times[0]).powf(1.0 / 9.0);
    let ok = (1.5..=3.0).contains(&mean);
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    report(
        10,
        ok,
        format!("(soft) mean growth {mean:.2} per crossing, steps [{}], k=10 took {:.2} s", shown.join(", "), times[9]),
    )
}

fn main() {
    let mut t = Tally::default();
    let gating = [
        criterion_1(&mut t),
        criterion_2(&mut t),
        criterion_3(&mut t),
        criterion_4(),
        criterion_5(&mut t),
        criterion_6(),
        criterion_7(),
        criterion_8(&t),
        criterion_9(&t),
    ];
    criterion_10();
    let failed = gating.iter().filter(|ok| !**ok).count();
    println!("acceptance: {}/9 gating criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

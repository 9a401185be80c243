//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sqfree_core::brill_noether::{
    clifford_index, girth_inequality_rows, gonality, gonality_bounds, least_girth_rows, verify_clifford, CliffordOptions, GirthRow,
    PencilSearchOptions,
};
use sqfree_core::decompose::{is_indecomposable, is_isomorphic, SearchOptions, Verdict};
use sqfree_core::generators::{random_graph_module, RandomModuleOptions};
use sqfree_core::homology::is_two_cm_complex;
use sqfree_core::jacobian::{classify_cycle_graph, edge_module_at_point, jacobian_is_isomorphic, module_from_holonomies, tree_normalize};
use sqfree_core::{CanonicalOmega, Face, Field, Graph, Scalar, SquareFreeModule};

const Q: Field = Field::Rational;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn named() -> Vec<(&'static str, Graph)> {
    let mut out: Vec<(&'static str, Graph)> = vec![
        ("K33", Graph::k33()),
        ("Petersen", Graph::petersen()),
        ("Heawood", Graph::heawood()),
        ("theta(1,1,1)", Graph::theta(&[1, 1, 1]).unwrap()),
        ("K4", Graph::complete(4).unwrap()),
    ];
    for (k, name) in [(3, "C3"), (4, "C4"), (5, "C5"), (6, "C6"), (7, "C7"), (8, "C8")] {
        out.push((name, Graph::cycle(k).unwrap()));
    }
    out
}

fn degree_by_hand(m: &SquareFreeModule, g: &Graph) -> i64 {
    (1..=g.vertex_count()).map(|v| m.dim_at(Face::vertex(v)) as i64 - 1).sum()
}

fn criterion_1() -> Outcome {
    let cases = [("K33", Graph::k33(), 4, 4), ("Petersen", Graph::petersen(), 6, 5), ("Heawood", Graph::heawood(), 8, 6)];
    let mut ok = true;
    let mut slowest = Duration::ZERO;
    let mut parts = Vec::new();
    for (name, g, genus, girth) in cases {
        let t = Instant::now();
        let got = (g.genus().unwrap(), g.girth().unwrap());
        let dt = t.elapsed();
        slowest = slowest.max(dt);
        ok &= got == (genus, girth) && dt < Duration::from_secs(1);
        parts.push(format!("{name} {got:?}"));
    }
    check(ok, format!("{}; slowest {:.3}s", parts.join(", "), slowest.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut failures = 0;
    let mut checked = 0;
    let rr = |m: &SquareFreeModule, g: &Graph| -> bool {
        let genus = g.genus().unwrap() as i64;
        let l = m.dims()[0] as i64;
        let oracle = m.local_cohomology_dims(Face::EMPTY);
        let l_omega = oracle[m.cm_dimension()] as i64;
        let report = m.riemann_roch_check().unwrap();
        report.holds && l_omega == report.l_omega as i64 && l - l_omega == 1 + degree_by_hand(m, g) - genus
    };
    for (_, g) in named() {
        let k = SquareFreeModule::structure_module(&g.complex(), Q);
        let om = CanonicalOmega::build(&g, Q).unwrap();
        for m in [&k, om.module()] {
            checked += 1;
            if !rr(m, &g) {
                failures += 1;
            }
        }
    }
    let mut pool: Vec<Graph> = (3..=8).map(|k| Graph::cycle(k).unwrap()).collect();
    pool.extend([Graph::k33(), Graph::petersen(), Graph::theta(&[1, 1, 1]).unwrap(), Graph::theta(&[0, 2, 3]).unwrap()]);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut random = 0;
    for g in &pool {
        for _ in 0..52 {
            let m = random_graph_module(g, Q, RandomModuleOptions::default(), &mut rng).unwrap();
            checked += 1;
            random += 1;
            if !(m.is_cm() && m.is_locally_rank_one() && rr(&m, g)) {
                failures += 1;
            }
        }
    }
    let dt = t.elapsed();
    check(
        failures == 0 && random >= 500 && dt < Duration::from_secs(60),
        format!("{checked} modules ({random} random), {failures} failures, {:.1}s", dt.as_secs_f64()),
    )
}

fn criterion_3() -> Outcome {
    let mut faces = 0;
    let mut bad = Vec::new();
    for (name, g) in named().into_iter().filter(|(_, g)| g.is_two_connected()) {
        let k = SquareFreeModule::structure_module(&g.complex(), Q);
        let dims = k.omega_dims().unwrap();
        let om = CanonicalOmega::build(&g, Q).unwrap();
        let d = k.cm_dimension();
        for (i, &f) in g.complex().faces().iter().enumerate() {
            let expected = match f.len() {
                0 => g.genus().unwrap(),
                1 => g.valency(f.to_vec()[0]) - 1,
                _ => 1,
            };
            let oracle = k.local_cohomology_dims(f)[d];
            faces += 1;
            if dims[i] != expected || oracle != expected || om.module().dims()[i] != expected {
                bad.push(format!("{name} {f}"));
            }
        }
    }
    check(bad.is_empty(), format!("{faces} faces on 2-connected named graphs, mismatches {bad:?}"))
}

fn cut_vertex_graphs() -> Vec<Graph> {
    let e = |n: usize, es: &[(usize, usize)]| Graph::new(n, es).unwrap();
    vec![
        Graph::path(3).unwrap(),
        Graph::path(4).unwrap(),
        Graph::path(6).unwrap(),
        e(4, &[(1, 2), (1, 3), (1, 4)]),
        e(5, &[(1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)]),
        e(4, &[(1, 2), (1, 3), (2, 3), (3, 4)]),
        e(7, &[(1, 2), (2, 3), (3, 4), (1, 4), (4, 5), (5, 6), (6, 7), (4, 7)]),
        e(7, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (4, 5), (4, 6), (4, 7), (5, 6), (5, 7), (6, 7)]),
        e(6, &[(1, 2), (2, 3), (3, 4), (1, 4), (4, 5), (5, 6)]),
        e(6, &[(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (5, 6), (4, 6)]),
        e(8, &[(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (5, 6), (4, 6), (6, 7), (7, 8), (6, 8)]),
    ]
}

fn criterion_4() -> Outcome {
    let mut two: Vec<Graph> = named().into_iter().map(|(_, g)| g).collect();
    two.push(Graph::theta(&[0, 2, 3]).unwrap());
    two.push(Graph::complete(5).unwrap());
    let cut = cut_vertex_graphs();
    let mut bad = 0;
    let (mut n2, mut nc) = (0, 0);
    for g in two.iter().chain(cut.iter()) {
        let a = is_two_cm_complex(&g.complex(), Q);
        let b = g.is_two_connected();
        let c = CanonicalOmega::build(g, Q).unwrap().is_generated_in_degree_zero();
        if b {
            n2 += 1;
        } else {
            nc += 1;
        }
        if a != b || b != c {
            bad += 1;
        }
    }
    let cut_ok = cut.iter().all(|g| !g.cut_vertices().is_empty());
    check(bad == 0 && n2 >= 10 && nc >= 10 && cut_ok, format!("{n2} 2-connected, {nc} with a cut vertex, {bad} disagreements"))
}

fn criterion_5(certified: &mut Vec<(i64, usize)>) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g, want) in [("K33", Graph::k33(), 3), ("Petersen", Graph::petersen(), 4), ("Heawood", Graph::heawood(), 5)] {
        let t = Instant::now();
        let res = gonality(&g, &PencilSearchOptions::default()).unwrap();
        let dt = t.elapsed();
        let verified = res.certificate.verify(&g, SearchOptions::default()).unwrap();
        let b = gonality_bounds(&g).unwrap();
        let d = res.gonality;
        for c in res.attempts.iter().filter(|c| c.is_valid()) {
            certified.push((c.degree, c.r));
        }
        ok &= d == want && verified && d as usize <= b.girth_bound && d as usize <= b.genus_bound && dt < Duration::from_secs(600);
        parts.push(format!("{name} {d} (verified {verified}, {:.1}s)", dt.as_secs_f64()));
    }
    check(ok, parts.join(", "))
}

fn criterion_6(mut certified: Vec<(i64, usize)>) -> Outcome {
    let mut violations = 0;
    let mut indices = Vec::new();
    for g in [Graph::k33(), Graph::petersen(), Graph::heawood()] {
        let res = clifford_index(&g, &CliffordOptions::default()).unwrap();
        violations += res.violations;
        certified.extend(res.enumerated.iter().map(|c| (c.degree, c.r)));
        indices.push(res.index);
        let om = CanonicalOmega::build(&g, Q).unwrap();
        if !verify_clifford(om.module()).unwrap() {
            violations += 1;
        }
        certified.push((om.module().degree(), om.module().global_sections() - 1));
    }
    violations += certified.iter().filter(|&&(d, r)| d < 2 * r as i64).count();
    check(
        violations == 0 && !certified.is_empty(),
        format!("{} special effective modules, {violations} violations of d >= 2r; Cliff K33/Petersen/Heawood <= {indices:?}", certified.len()),
    )
}

fn random_holonomy(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let p: i64 = rng.random_range(-40..=40);
        let q: i64 = rng.random_range(1..=40);
        if p != 0 {
            return Scalar::Rational(BigRational::new(p.into(), q.into()));
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut round_trips = 0;
    let mut failures = Vec::new();
    let opts = SearchOptions::default();
    for (name, g) in [("C3", Graph::cycle(3).unwrap()), ("C5", Graph::cycle(5).unwrap()), ("theta", Graph::theta(&[1, 1, 1]).unwrap())] {
        let genus = g.genus().unwrap();
        let mut tuples = Vec::new();
        for _ in 0..100 {
            let h: Vec<Scalar> = (0..genus).map(|_| random_holonomy(&mut rng)).collect();
            let m = module_from_holonomies(&g, Q, &h).unwrap();
            if tree_normalize(&m).unwrap().holonomies() != h || !m.is_cm() {
                failures.push(format!("{name} round trip"));
            }
            round_trips += 1;
            tuples.push((h, m));
        }
        let grid = [Q.one(), Q.from_i64(2), Q.from_i64(-1)];
        let grid_modules: Vec<SquareFreeModule> = (0..grid.len().pow(genus as u32))
            .map(|mut k| {
                let h: Vec<Scalar> = (0..genus)
                    .map(|_| {
                        let x = grid[k % grid.len()].clone();
                        k /= grid.len();
                        x
                    })
                    .collect();
                module_from_holonomies(&g, Q, &h).unwrap()
            })
            .collect();
        for a in &grid_modules {
            for b in &grid_modules {
                let fast = jacobian_is_isomorphic(a, b).unwrap();
                let general = is_isomorphic(a, b, opts).unwrap();
                if general == Verdict::Inconclusive || fast != general.is_yes() {
                    failures.push(format!("{name} isomorphism cross-check"));
                }
            }
        }
    }
    let c4 = Graph::cycle(4).unwrap();
    let mut l_ok = true;
    for (s, t) in [(1, 1), (2, 1), (-1, 1), (1, 3), (5, 7)] {
        let h = Scalar::Rational(BigRational::new(s.into(), t.into()));
        let m = module_from_holonomies(&c4, Q, &[h.clone()]).unwrap();
        let cls = classify_cycle_graph(&m).unwrap();
        let want_l = if h.is_one() { 1 } else { 0 };
        l_ok &= m.global_sections() == want_l && cls.point == (h, Q.one()) && cls.distinguished_edge.is_none();
    }
    let mut doubled = Vec::new();
    for e in 0..4 {
        for (s, t) in [(Q.zero(), Q.one()), (Q.one(), Q.zero())] {
            let m = edge_module_at_point(&c4, Q, e, &s, &t).unwrap();
            let cls = classify_cycle_graph(&m).unwrap();
            l_ok &= m.global_sections() == 0 && m.is_cm() && cls.point == (s.clone(), t.clone());
            l_ok &= is_indecomposable(&m, opts).unwrap() == Verdict::Yes;
            doubled.push((cls, m));
        }
    }
    let mut distinct = true;
    for i in 0..doubled.len() {
        for j in i + 1..doubled.len() {
            let same_class = doubled[i].0 == doubled[j].0;
            let iso = is_isomorphic(&doubled[i].1, &doubled[j].1, opts).unwrap();
            distinct &= !same_class && iso == Verdict::No;
        }
    }
    check(
        failures.is_empty() && l_ok && distinct,
        format!("{round_trips} round trips, C4: 8 doubled classes pairwise non-isomorphic {distinct}, l = 1 only at (1,1) {l_ok}, failures {failures:?}"),
    )
}

fn criterion_8() -> Outcome {
    let graphs = [
        ("C3", Graph::cycle(3).unwrap()),
        ("C5", Graph::cycle(5).unwrap()),
        ("theta", Graph::theta(&[1, 1, 1]).unwrap()),
        ("K4", Graph::complete(4).unwrap()),
        ("K33", Graph::k33()),
        ("Petersen", Graph::petersen()),
    ];
    let opts = SearchOptions::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g) in &graphs {
        let s = g.max_independent_connected_complement().unwrap() as i64;
        let genus = g.genus().unwrap() as i64;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut count = 0;
        let mut draws = 0;
        let (mut lo, mut hi) = (i64::MAX, i64::MIN);
        while count < 200 && draws < 3000 {
            draws += 1;
            let mix = if draws % 2 == 0 {
                RandomModuleOptions { zero_vertex_probability: 0.05, unit_probability: 0.7, ..Default::default() }
            } else {
                RandomModuleOptions { zero_vertex_probability: 0.2, unit_probability: 0.3, ..Default::default() }
            };
            let m = random_graph_module(g, Q, mix, &mut rng).unwrap();
            if is_indecomposable(&m, opts).unwrap() != Verdict::Yes {
                continue;
            }
            count += 1;
            let d = m.degree();
            lo = lo.min(d);
            hi = hi.max(d);
            ok &= m.is_cm() && -s <= d && d <= 2 * genus - 2 + s;
        }
        ok &= count >= 200;
        let min = SquareFreeModule::build_min_degree(g, Q).unwrap();
        ok &= min.degree() == -s;
        parts.push(format!("{name} s={s} n={count} deg in [{lo},{hi}]"));
    }
    for g in [Graph::cycle(3).unwrap(), Graph::k33()] {
        for d in 0..=g.genus().unwrap() {
            let m = SquareFreeModule::build_effective(&g, Q, d).unwrap();
            ok &= m.degree() == d as i64 && m.global_sections() == 1 && m.is_cm() && is_indecomposable(&m, opts).unwrap() == Verdict::Yes;
        }
    }
    check(ok, format!("{}; min-degree attains -s; effective degrees 0..=g on C3, K33", parts.join(", ")))
}

fn criterion_9() -> Outcome {
    let row = |genus, v_min, v_max, girth| GirthRow { genus, v_min, v_max, girth };
    let first = least_girth_rows(3, 4, 12);
    let first_ok = first == [row(4, 4, 6, 4), row(6, 10, 10, 5), row(7, 10, 12, 6), row(8, 10, 14, 6), row(12, 22, 22, 8)];
    let sharp = girth_inequality_rows(3, 4, 12, true);
    let sharp_ok = sharp == [row(4, 6, 6, 4), row(6, 10, 10, 5), row(8, 14, 14, 6)];
    let mut graphs_ok = true;
    for (g, r) in [Graph::k33(), Graph::petersen(), Graph::heawood()].iter().zip(&sharp) {
        let cubic = (1..=g.vertex_count()).all(|v| g.valency(v) == 3);
        graphs_ok &= cubic && g.genus().unwrap() == r.genus && g.vertex_count() == r.v_min && g.girth().unwrap() == r.girth;
    }
    check(
        first_ok && sharp_ok && graphs_ok,
        format!("{} least-girth rows, {} sharpened rows, matched by K33/Petersen/Heawood {graphs_ok}", first.len(), sharp.len()),
    )
}

fn main() {
    let mut certified = Vec::new();
    let c5 = criterion_5(&mut certified);
    let results = [
        ("1 named-graph genus and girth", criterion_1()),
        ("2 Riemann-Roch identity", criterion_2()),
        ("3 canonical-module dimensions", criterion_3()),
        ("4 2-CM equivalence", criterion_4()),
        ("5 gonality certificates", c5),
        ("6 Clifford property", criterion_6(certified)),
        ("7 Jacobian round trip and C4 classes", criterion_7()),
        ("8 degree bounds", criterion_8()),
        ("9 girth inequality tables", criterion_9()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

//! Acceptance suite. Every criterion prints one line `criterion N ... PASS|FAIL`
//! before asserting, so `cargo test --test acceptance -- --nocapture` gives a
//! readable summary.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use orbitscope::covering::{
    check_section, covering_map, disc_grid, fiber_cardinality, random_cover_point, CoverVariant,
};
use orbitscope::levi::{
    algebraic_levi_signature, block_coefficients, build_site, complex_hessian, fd_complex_hessian,
    numeric_levi_signature, numeric_levi_signature_with, SiteCase,
};
use orbitscope::lie_core::{restricted_root_decomposition, standard_generators, AlgElement, LieAlgebra};
use orbitscope::linalg::{frob, CMat};
use orbitscope::models::{act_matrix, random_translates, representative_point, slice_point, RepKind, SliceId};
use orbitscope::orbits::{classify_label, classify_point, level_set_samples, DomainId, OrbitLabel};
use orbitscope::rng::seeded;
use orbitscope::stein::{
    boundary_orbits, check_biholomorphism, table_entries, torus_orbit_profile,
    verify_stein_table, w_domain_of, Method,
};
use orbitscope::{Family, GroupSpec};

fn so(n: usize) -> GroupSpec {
    GroupSpec::so0(n).unwrap()
}

fn su(n: usize) -> GroupSpec {
    GroupSpec::su(n).unwrap()
}

fn verdict(id: u8, title: &str, ok: bool, detail: &str) {
    println!("criterion {id:>2} {title}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
}

#[test]
fn c01_root_space_dimensions() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let cases = (2..=5).map(|n| (so(n), (n - 1, 0))).chain((2..=4).map(|n| (su(n), (2 * (n - 1), 1))));
    for (spec, want) in cases {
        let a0 = standard_generators(spec).a0;
        let got = restricted_root_decomposition(spec, &AlgElement::real(spec, a0)).unwrap().dims();
        if got != want {
            bad.push(format!("{} {got:?} != {want:?}", spec.label()));
        }
    }
    let el = t.elapsed();
    let ok = bad.is_empty() && el < Duration::from_secs(1);
    verdict(1, "root space dimensions", ok, &format!("{:.3}s {bad:?}", el.as_secs_f64()));
    assert!(ok);
}

#[test]
fn c02_boundary_eigenvalue_counts() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut rng = seeded(2);
    for n in 3..=5 {
        let spec = so(n);
        for d in [DomainId::D1(0.0), DomainId::D2(0.0)] {
            let bds = boundary_orbits(spec, &d).unwrap();
            if bds.is_empty() {
                bad.push(format!("{} {d:?}: no boundary orbit", spec.label()));
            }
            for b in bds {
                let flip = !b.domain_below;
                for p in random_translates(&b.representative, 50, 1.0, &mut rng) {
                    let s = numeric_levi_signature_with(spec, &p, 1e-8).unwrap();
                    let s = if flip { s.flipped() } else { s };
                    if s.triple() != (n - 2, 0, 1) {
                        bad.push(format!("{} {d:?} {}: {:?}", spec.label(), b.name, s.triple()));
                    }
                }
            }
        }
    }
    let el = t.elapsed();
    let ok = bad.is_empty() && el < Duration::from_secs(10);
    bad.truncate(5);
    verdict(2, "boundary eigenvalue counts SO0(n,1)", ok, &format!("{:.2}s {bad:?}", el.as_secs_f64()));
    assert!(ok);
}

#[test]
fn c03_levi_flatness_lowest_rank() {
    let mut bad = Vec::new();
    let mut rng = seeded(3);
    for spec in [so(2), su(1)] {
        for k in 1..=4 {
            let w = representative_point(spec, RepKind::W(k)).unwrap();
            for p in random_translates(&w, 50, 1.5, &mut rng) {
                let s = numeric_levi_signature(spec, &p).unwrap();
                if s.triple() != (0, 0, 1) {
                    bad.push(format!("{} w{k}: {:?}", spec.label(), s.triple()));
                }
            }
        }
    }
    let ok = bad.is_empty();
    bad.truncate(5);
    verdict(3, "Levi flatness of the four non-closed orbits", ok, &format!("{bad:?}"));
    assert!(ok);
}

#[test]
fn c04_algebraic_site_signs() {
    let mut bad = Vec::new();
    let mut cases = Vec::new();
    for n in 3..=5 {
        cases.push((so(n), SiteCase::ReducedX0, true));
        cases.push((so(n), SiteCase::ReducedY0, true));
    }
    for n in 2..=3 {
        cases.push((su(n), SiteCase::NonReducedZ2X0, true));
        cases.push((su(n), SiteCase::NonReducedZ2Y0, true));
        cases.push((su(n), SiteCase::NonReducedZ3X, false));
    }
    for (spec, case, definite) in &cases {
        let site = build_site(*spec, *case).unwrap();
        let alg = algebraic_levi_signature(*spec, &site).unwrap();
        let (p, m, _) = alg.triple();
        let is_definite = alg.is_one_signed() && p + m > 0;
        let is_indefinite = p > 0 && m > 0;
        if (*definite && !is_definite) || (!*definite && !is_indefinite) {
            bad.push(format!("{} {case}: {:?}", spec.label(), alg.triple()));
        }
        let num = numeric_levi_signature(*spec, &site.point).unwrap();
        if num.triple() != alg.triple() && num.flipped().triple() != alg.triple() {
            bad.push(format!("{} {case}: numeric {:?} vs algebraic {:?}", spec.label(), num.triple(), alg.triple()));
        }
    }
    let mut rng = seeded(4);
    let mut worst_p = f64::INFINITY;
    let mut worst_n = f64::NEG_INFINITY;
    for (spec, case) in [(so(3), SiteCase::ReducedX0), (so(4), SiteCase::ReducedX0), (so(5), SiteCase::ReducedX0), (su(2), SiteCase::NonReducedZ3X), (su(3), SiteCase::NonReducedZ3X)] {
        let site = build_site(spec, case).unwrap();
        let bc = block_coefficients(&site, 100, &mut rng).unwrap();
        worst_p = bc.p.iter().copied().fold(worst_p, f64::min);
        worst_n = bc.n.iter().copied().fold(worst_n, f64::max);
    }
    if worst_p < -1e-10 || worst_n > 1e-10 {
        bad.push(format!("coefficient signs: min p {worst_p:e}, max n {worst_n:e}"));
    }
    let ok = bad.is_empty();
    verdict(4, "algebraic site signatures and coefficient signs", ok, &format!("{} sites {bad:?}", cases.len()));
    assert!(ok);
}

#[test]
fn c05_stein_table() {
    let mut bad = Vec::new();
    let mut worst_rt: f64 = 0.0;
    let mut slowest: f64 = 0.0;
    let mut checked = 0;
    let specs = [so(2), so(3), so(4), su(1), su(2), su(3)];
    for spec in specs {
        let t = Instant::now();
        let rows = verify_stein_table(spec, 200, 5).unwrap();
        for r in rows.iter().filter(|r| !r.pass) {
            bad.push(format!("{} {}: {}", spec.label(), r.domain, r.detail));
        }
        let mut rng = seeded(55);
        for e in table_entries(spec).iter().filter(|e| e.method == Method::Biholomorphism) {
            for d in &e.instances {
                let wd = w_domain_of(spec, d).expect("model map for a biholomorphism row");
                let c = check_biholomorphism(spec, &wd, 1000, &mut rng).unwrap();
                checked += 1;
                worst_rt = worst_rt.max(c.round_trip_error);
                if c.round_trip_error > 1e-9 || c.images_outside > 0 {
                    bad.push(format!("{} {d:?}: round trip {:e}, outside {}", spec.label(), c.round_trip_error, c.images_outside));
                }
            }
        }
        let el = t.elapsed().as_secs_f64();
        slowest = slowest.max(el);
        if el >= 60.0 {
            bad.push(format!("{} took {el:.1}s", spec.label()));
        }
    }
    let ok = bad.is_empty();
    bad.truncate(5);
    verdict(
        5,
        "Stein table columns",
        ok,
        &format!("{checked} model maps, round trip {worst_rt:.1e}, slowest column {slowest:.2}s {bad:?}"),
    );
    assert!(ok);
}

#[test]
fn c06_torus_profile() {
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for spec in [su(2), su(3)] {
        for k in 1..=9 {
            let t = k as f64 / 10.0;
            let pr = torus_orbit_profile(spec, t).unwrap();
            let r = 0.5 * (1.0 / (std::f64::consts::FRAC_PI_4 * (1.0 - t)).tan()).ln();
            let mut roots = pr.numeric_roots.clone();
            roots.sort_by(f64::total_cmp);
            let err = if roots.len() == 2 { (roots[0] + r).abs().max((roots[1] - r).abs()) } else { f64::INFINITY };
            worst = worst.max(err);
            if pr.zero_count != 2 || err > 1e-8 {
                bad.push(format!("{} t={t}: zeros {} err {err:e}", spec.label(), pr.zero_count));
            }
        }
    }
    let ok = bad.is_empty();
    verdict(6, "torus profile roots", ok, &format!("max root error {worst:.1e} {bad:?}"));
    assert!(ok);
}

fn w_labels(spec: GroupSpec, anchor: RepKind, seed: u64) -> (BTreeSet<u8>, usize) {
    let mut rng = seeded(seed);
    let pts = level_set_samples(spec, anchor, 500, 0.05, &mut rng).unwrap();
    let mut labels = BTreeSet::new();
    let mut other = 0;
    for p in &pts {
        match classify_label(spec, p).unwrap() {
            OrbitLabel::NonClosed(k) => {
                labels.insert(k);
            }
            _ => other += 1,
        }
    }
    (labels, other)
}

#[test]
fn c07_orbit_counts_near_singular_orbits() {
    let mut bad = Vec::new();
    let mut summary = Vec::new();
    for (spec, want) in [(so(2), 4), (su(1), 4), (su(2), 4), (su(3), 4), (so(3), 2), (so(4), 2), (so(5), 2)] {
        let (labels, other) = w_labels(spec, RepKind::Z2, 7);
        summary.push(format!("{}:{}", spec.label(), labels.len()));
        if labels.len() != want || other != 0 {
            bad.push(format!("{} near z2: {labels:?}, {other} unlabelled", spec.label()));
        }
    }
    for spec in [su(2), su(3)] {
        let (labels, other) = w_labels(spec, RepKind::Z3, 8);
        summary.push(format!("{} z3:{}", spec.label(), labels.len()));
        if labels.len() != 1 || !labels.contains(&5) || other != 0 {
            bad.push(format!("{} near z3: {labels:?}, {other} unlabelled", spec.label()));
        }
    }
    let ok = bad.is_empty();
    verdict(7, "non-closed orbit counts near z2 and z3", ok, &format!("{} {bad:?}", summary.join(" ")));
    assert!(ok);
}

#[test]
fn c08_covering_checks() {
    let mut bad = Vec::new();
    let mut rng = seeded(8);
    for (variant, with_lambda, full) in [(CoverVariant::OrbitCover, false, 4), (CoverVariant::GroupCover, true, 6)] {
        for _ in 0..50 {
            let x = random_cover_point(&mut rng, with_lambda);
            let target = covering_map(&x, variant).unwrap();
            let rep = fiber_cardinality(&target, variant, 24, &mut rng).unwrap();
            if rep.fiber_count != 2 || rep.jacobian_ranks.iter().any(|&r| r != full) {
                bad.push(format!("{variant:?}: fiber {} ranks {:?}", rep.fiber_count, rep.jacobian_ranks));
            }
        }
    }
    let sec = check_section(&disc_grid(20), None).unwrap();
    if sec.max_det_error > 1e-12 || sec.max_base_error > 1e-12 || sec.outside > 0 {
        bad.push(format!("section {sec:?}"));
    }
    let ok = bad.is_empty();
    bad.truncate(5);
    verdict(
        8,
        "covering fibers and section",
        ok,
        &format!("{} grid points, det {:.1e}, base {:.1e} {bad:?}", sec.points, sec.max_det_error, sec.max_base_error),
    );
    assert!(ok);
}

fn slices(spec: GroupSpec) -> Vec<u8> {
    match (spec.family, spec.n) {
        (Family::SO0, 2) | (Family::SU, 1) => vec![1, 2, 3, 4],
        (Family::SO0, _) => vec![1, 2],
        (Family::SU, _) => vec![1, 2, 3, 4, 5],
    }
}

fn grid(j: u8) -> Vec<f64> {
    let log: Vec<f64> = (0..=12).map(|k| 10f64.powf(-4.0 + k as f64 / 3.0)).collect();
    if j == 1 || j == 3 {
        log.into_iter().filter(|&t| t < 0.99).chain((1..99).map(|k| k as f64 / 100.0)).collect()
    } else {
        // Beyond about 6 the coordinates (of size e^t) no longer pin the parameter to 1e-8.
        log.into_iter().chain((1..=48).map(|k| k as f64 / 8.0)).collect()
    }
}

#[test]
fn c09_classifier_soundness() {
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    let specs = [so(2), so(3), so(4), su(1), su(2), su(3)];
    for spec in specs {
        for j in slices(spec) {
            for t in grid(j) {
                let p = slice_point(spec, SliceId::new(j), t).unwrap();
                match classify_point(spec, &p).unwrap().label {
                    OrbitLabel::Principal { slice, param } if slice == j => {
                        worst = worst.max((param - t).abs());
                        if (param - t).abs() > 1e-8 {
                            bad.push(format!("{} l{j}({t}) -> {param}", spec.label()));
                        }
                    }
                    other => bad.push(format!("{} l{j}({t}) -> {other}", spec.label())),
                }
            }
        }
    }
    let mut rng = seeded(9);
    let mut pairs = 0;
    while pairs < 1000 {
        let spec = specs[pairs % specs.len()];
        let js = slices(spec);
        let j = js[(pairs / specs.len()) % js.len()];
        let t = if j == 1 || j == 3 { 0.05 + 0.9 * rand_unit(&mut rng) } else { 0.05 + 2.0 * rand_unit(&mut rng) };
        let p = slice_point(spec, SliceId::new(j), t).unwrap();
        let g = orbitscope::lie_core::expm(&LieAlgebra::new(spec).random_element(&mut rng, 1.5));
        let q = act_matrix(spec, &g, &p);
        let (a, b) = (classify_label(spec, &p).unwrap(), classify_label(spec, &q).unwrap());
        let same = match (a, b) {
            (OrbitLabel::Principal { slice: s1, param: t1 }, OrbitLabel::Principal { slice: s2, param: t2 }) => {
                s1 == s2 && (t1 - t2).abs() <= 1e-8 * t1.max(1.0)
            }
            _ => a == b,
        };
        if !same {
            bad.push(format!("{}: {a} vs {b}", spec.label()));
        }
        pairs += 1;
    }
    let spec = su(2);
    let z3 = classify_point(spec, &representative_point(spec, RepKind::Z3).unwrap()).unwrap();
    let w5 = classify_point(spec, &representative_point(spec, RepKind::W(5)).unwrap()).unwrap();
    if z3.rank != 4 || w5.rank != 7 || z3.label != OrbitLabel::SingularZ3 || w5.label != OrbitLabel::NonClosed(5) {
        bad.push(format!("z3 {} rank {}, w5 {} rank {}", z3.label, z3.rank, w5.label, w5.rank));
    }
    let ok = bad.is_empty();
    bad.truncate(5);
    verdict(
        9,
        "classifier round trip, invariance and rank separation",
        ok,
        &format!("max param error {worst:.1e}, {pairs} pairs {bad:?}"),
    );
    assert!(ok);
}

fn rand_unit(rng: &mut orbitscope::rng::Rng) -> f64 {
    use rand::Rng;
    rng.gen::<f64>()
}

#[test]
fn c10_hessian_cross_check() {
    let mut rng = seeded(10);
    let specs = [so(2), so(3), so(4), su(1), su(2), su(3)];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut bad = Vec::new();
    while count < 100 {
        let spec = specs[count % specs.len()];
        let js = slices(spec);
        let j = js[count % js.len()];
        // On the non-compact slices the curvature scale shrinks like e^(-2t), so a fixed
        // step of 1e-4 only resolves the Hessian to 1e-5 for moderate t.
        let t = if j == 1 || j == 3 { 0.1 + 0.8 * rand_unit(&mut rng) } else { 0.05 + 0.95 * rand_unit(&mut rng) };
        let base = slice_point(spec, SliceId::new(j), t).unwrap();
        let p = random_translates(&base, 1, 1.0, &mut rng).pop().unwrap();
        let cj = complex_hessian(spec, &p).unwrap();
        let fd: CMat = fd_complex_hessian(spec, &cj.chart, &cj.coords, 1e-4).unwrap();
        let rel = frob(&(&fd - &cj.jet.hess)) / frob(&cj.jet.hess);
        worst = worst.max(rel);
        if rel > 1e-5 {
            bad.push(format!("{} l{j}({t:.3}): {rel:e}", spec.label()));
        }
        count += 1;
    }
    let ok = bad.is_empty();
    bad.truncate(5);
    verdict(10, "analytic vs finite-difference Hessian", ok, &format!("{count} points, max rel {worst:.1e} {bad:?}"));
    assert!(ok);
}

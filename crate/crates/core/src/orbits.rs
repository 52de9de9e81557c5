//! Invariants, classification and domain membership.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_core::{expm, real_form_basis, standard_generators, DiagramId, Family, GroupSpec};
use crate::linalg::*;
use crate::models::{act_matrix, RepKind, alg_action_ambient, point_residual, slice_point, Coords, ModelPoint, SliceId};

pub const SIGN_TOL: f64 = 1e-9;
pub const RANK_TOL: f64 = 1e-8;

/// `<z,w> = z_1 conj(w_1) + ... + z_n conj(w_n) - z_{n+1} conj(w_{n+1})`.
pub fn hermitian_pairing(z: &CVec, w: &CVec) -> Result<C64> {
    if z.len() != w.len() || z.is_empty() {
        return Err(Error::SpecMismatch(format!("pairing of lengths {} and {}", z.len(), w.len())));
    }
    let last = z.len() - 1;
    let mut acc = cr(0.0);
    for i in 0..last {
        acc += z[i] * w[i].conj();
    }
    Ok(acc - z[last] * w[last].conj())
}

fn lorentz(x: &[f64]) -> f64 {
    let last = x.len() - 1;
    x[..last].iter().map(|v| v * v).sum::<f64>() - x[last] * x[last]
}

/// The invariant function `f`.
pub fn invariant_f(p: &ModelPoint) -> Result<f64> {
    match &p.coords {
        Coords::Quadric(xi) => {
            let last = xi.len() - 1;
            let s: f64 = xi.iter().take(last).map(|v| v.norm_sqr()).sum();
            Ok(s - xi[last].norm_sqr() - 1.0)
        }
        Coords::Pair { z, w } => {
            let zn = z / cr(vnorm(z));
            let wn = w / cr(vnorm(w));
            let pr = hermitian_pairing(&zn, &wn)?;
            if pr.norm() < 1e-12 {
                return Err(Error::IncidenceDivisor);
            }
            let h1 = hermitian_pairing(&zn, &zn)?.re;
            let h2 = hermitian_pairing(&wn, &wn)?.re;
            Ok(-h1 * h2 / pr.norm_sqr())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OrbitLabel {
    SingularZ1,
    SingularZ2,
    SingularZ3,
    Principal { slice: u8, param: f64 },
    NonClosed(u8),
}

impl OrbitLabel {
    /// Short tag without the principal parameter.
    pub fn kind_tag(&self) -> String {
        match self {
            OrbitLabel::SingularZ1 => "z1".into(),
            OrbitLabel::SingularZ2 => "z2".into(),
            OrbitLabel::SingularZ3 => "z3".into(),
            OrbitLabel::Principal { slice, .. } => format!("l{slice}"),
            OrbitLabel::NonClosed(k) => format!("w{k}"),
        }
    }

    pub fn same_kind(&self, other: &OrbitLabel) -> bool {
        self.kind_tag() == other.kind_tag()
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitLabel::Principal { slice, param } => write!(f, "l{slice}({param})"),
            other => write!(f, "{}", other.kind_tag()),
        }
    }
}

/// Sign with dead zone.
fn dsign(v: f64, tol: f64) -> i8 {
    if v > tol {
        1
    } else if v < -tol {
        -1
    } else {
        0
    }
}

/// Invariant used to tell the non-closed orbits on the nilcone apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NilKey {
    /// Sign of the last coordinate of the null vector, and (n = 2 only) of the cross-product factor.
    Lorentz { time: i8, cross: i8 },
    /// Signs of `<z,z>` and `<w,w>`.
    Pair { sz: i8, sw: i8 },
}

/// Raw invariants of a point before labels are attached.
#[derive(Debug, Clone, Copy)]
enum Raw {
    Z1,
    Z2,
    Z3OrW5,
    Principal(u8, f64),
    Nil(NilKey),
}

#[derive(Debug, Clone, Copy)]
struct Invariants {
    raw: Raw,
    f: f64,
    s_z: Option<i8>,
    s_w: Option<i8>,
}

/// `theta` in `[0, pi/2]` from `sin^2 = a` and `cos^2 = b` (a + b = 1), picking the well-conditioned branch.
fn angle_from(sin2: f64, cos2: f64) -> f64 {
    if sin2 <= 0.5 {
        sin2.max(0.0).sqrt().asin()
    } else {
        cos2.max(0.0).sqrt().acos()
    }
}

fn invariants(spec: GroupSpec, p: &ModelPoint, tol: f64) -> Result<Invariants> {
    match &p.coords {
        Coords::Quadric(xi) => {
            let scale = 1.0 + vnorm(xi).powi(2);
            let res = point_residual(p);
            if res > 1e-6 * scale {
                return Err(Error::Unclassifiable { residual: res, nearest: "off the quadric".into() });
            }
            let x: Vec<f64> = xi.iter().map(|v| v.re).collect();
            let y: Vec<f64> = xi.iter().map(|v| v.im).collect();
            let qx = lorentz(&x);
            let qy = lorentz(&y);
            let f = invariant_f(p)?;
            let last = x.len() - 1;
            let dz = tol * scale;
            let raw = match dsign(f, dz) {
                -1 => {
                    let time = if x[last] > 0.0 { 1 } else { -1 };
                    if qy < dz {
                        if time > 0 {
                            Raw::Z1
                        } else {
                            Raw::Z3OrW5
                        }
                    } else {
                        let th = angle_from(qy, -qx);
                        let t = 1.0 - 2.0 * th / PI;
                        Raw::Principal(if time > 0 { 1 } else { 3 }, t)
                    }
                }
                1 => {
                    let s = qx.max(0.0).sqrt().asinh() / 2.0;
                    let j = if spec.n == 2 {
                        let cz = x[0] * y[1] - x[1] * y[0];
                        if cz > 0.0 {
                            2
                        } else {
                            4
                        }
                    } else {
                        2
                    };
                    Raw::Principal(j, s)
                }
                _ => {
                    let xn2: f64 = x.iter().map(|v| v * v).sum();
                    if xn2 < dz {
                        Raw::Z2
                    } else {
                        let time = if x[last] > 0.0 { 1 } else { -1 };
                        let cross = if spec.n == 2 {
                            let cx = [x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], -(x[0] * y[1] - x[1] * y[0])];
                            let cfac = (cx[0] * x[0] + cx[1] * x[1] + cx[2] * x[2]) / xn2;
                            if cfac > 0.0 {
                                1
                            } else {
                                -1
                            }
                        } else {
                            0
                        };
                        Raw::Nil(NilKey::Lorentz { time, cross })
                    }
                }
            };
            Ok(Invariants { raw, f, s_z: None, s_w: None })
        }
        Coords::Pair { z, w } => {
            let zn = z / cr(vnorm(z));
            let wn = w / cr(vnorm(w));
            let pr = hermitian_pairing(&zn, &wn)?;
            if pr.norm() < 1e-9 {
                return Err(Error::IncidenceDivisor);
            }
            let h1 = hermitian_pairing(&zn, &zn)?.re;
            let h2 = hermitian_pairing(&wn, &wn)?.re;
            let f = -h1 * h2 / pr.norm_sqr();
            let sz = dsign(h1, tol);
            let sw = dsign(h2, tol);
            // 1 + f = -h1 <w', w'> / |P|^2 with w' the part of w orthogonal to z (z non-null)
            let one_plus_f = || -> f64 {
                let pzw = hermitian_pairing(&wn, &zn).unwrap();
                let wp = &wn - &zn * (pzw / cr(h1));
                let q = hermitian_pairing(&wp, &wp).unwrap().re;
                -h1 * q / pr.norm_sqr()
            };
            let raw = match (sz, sw) {
                (0, 0) => Raw::Z2,
                (0, _) | (_, 0) => Raw::Nil(NilKey::Pair { sz, sw }),
                (-1, -1) | (1, 1) => {
                    let a = one_plus_f();
                    if a.abs() < tol {
                        if sz < 0 {
                            Raw::Z1
                        } else {
                            Raw::Z3OrW5
                        }
                    } else if a > 0.0 {
                        let th = angle_from(a, -f);
                        let t = 1.0 - 2.0 * th / PI;
                        Raw::Principal(if sz < 0 { 1 } else { 3 }, t)
                    } else if sz > 0 && spec.n >= 2 {
                        Raw::Principal(5, (-a).sqrt().asinh() / 2.0)
                    } else {
                        return Err(Error::Unclassifiable { residual: -a, nearest: "z1".into() });
                    }
                }
                (-1, 1) => Raw::Principal(2, f.max(0.0).sqrt().asinh() / 2.0),
                _ => Raw::Principal(4, f.max(0.0).sqrt().asinh() / 2.0),
            };
            Ok(Invariants { raw, f, s_z: Some(sz), s_w: Some(sw) })
        }
    }
}

/// Realified tangent vectors `X p` for a basis of the real form (projected off scalings for SU).
pub fn tangent_matrix(spec: GroupSpec, p: &ModelPoint) -> RMat {
    let basis = real_form_basis(spec);
    let cols: Vec<RVec> = basis
        .iter()
        .map(|x| realify_vec(&project_tangent(p, &alg_action_ambient(spec, x, p))))
        .collect();
    RMat::from_columns(&cols)
}

/// Removes the scaling directions of the homogeneous coordinates (identity on the quadric).
pub fn project_tangent(p: &ModelPoint, v: &CVec) -> CVec {
    match &p.coords {
        Coords::Quadric(_) => v.clone(),
        Coords::Pair { z, w } => {
            let n1 = z.len();
            let wt = conj_vec(w);
            let mut out = v.clone();
            for (base, off) in [(z, 0usize), (&wt, n1)] {
                let part = CVec::from_fn(n1, |i, _| v[off + i]);
                let coef = base.dotc(&part) / cr(base.norm_squared());
                for i in 0..n1 {
                    out[off + i] = part[i] - base[i] * coef;
                }
            }
            out
        }
    }
}

/// Real dimension of the orbit through `p`.
pub fn orbit_tangent_rank(spec: GroupSpec, p: &ModelPoint) -> usize {
    rank_real(&tangent_matrix(spec, p), RANK_TOL)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub label: OrbitLabel,
    pub label_text: String,
    pub slice: Option<u8>,
    pub param: Option<f64>,
    pub f: f64,
    pub s_z: Option<i8>,
    pub s_w: Option<i8>,
    pub rank: usize,
    pub residual: f64,
}

/// Calibration table: nilcone key -> w index.
#[derive(Debug, Clone, Default)]
pub struct Calibration {
    pub table: Vec<(NilKey, u8)>,
}

impl Calibration {
    pub fn lookup(&self, key: NilKey) -> Option<u8> {
        self.table.iter().find(|(k, _)| *k == key).map(|(_, w)| *w)
    }
}

fn calibration_cache() -> &'static Mutex<HashMap<GroupSpec, Arc<Calibration>>> {
    static CACHE: OnceLock<Mutex<HashMap<GroupSpec, Arc<Calibration>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Which non-closed orbit separates slice `a` (f < 0 side) from slice `b`.
pub fn adjacency_label(spec: GroupSpec, a: u8, b: u8) -> Option<u8> {
    let d = orbit_diagram(spec.diagram());
    d.slice_adjacency.iter().find(|(_, (x, y))| (*x == a && *y == b) || (*x == b && *y == a)).map(|(w, _)| *w)
}

/// Labels the nilcone components by following torus paths out of the compact slices.
///
/// For each start slice `l1`, `l3` at a small parameter and each direction
/// `exp(+-isC)`, the path is followed until `f` changes sign; the crossing is
/// located by bisection and its key is matched with the slice pair it joins.
pub fn nilcone_calibration(spec: GroupSpec) -> Result<Arc<Calibration>> {
    if let Some(c) = calibration_cache().lock().unwrap().get(&spec) {
        return Ok(c.clone());
    }
    let gens = standard_generators(spec);
    let gen = match spec.family {
        Family::SO0 => gens.c.clone().unwrap(),
        Family::SU => gens.c_prime.clone().unwrap(),
    };
    let eps = 0.05;
    let mut table: Vec<(NilKey, u8)> = Vec::new();
    for j0 in [1u8, 3] {
        let start = slice_point(spec, SliceId::new(j0), eps)?;
        for sign in [1.0, -1.0] {
            let at = |s: f64| act_matrix(spec, &expm(&(&gen * (I * (sign * s)))), &start);
            let fval = |s: f64| invariant_f(&at(s)).unwrap_or(f64::NAN);
            let mut lo = 0.0;
            let mut hi = 0.05;
            while fval(hi) <= 0.0 {
                lo = hi;
                hi *= 1.5;
                if hi > 12.0 {
                    return Err(Error::Numerical("calibration path never leaves f < 0".into()));
                }
            }
            let far = invariants(spec, &at(hi + 0.5), SIGN_TOL)?;
            let j1 = match far.raw {
                Raw::Principal(j, _) => j,
                _ => return Err(Error::Numerical("calibration path ends off the principal slices".into())),
            };
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if fval(mid) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 {
                    break;
                }
            }
            let cross = invariants(spec, &at(0.5 * (lo + hi)), 1e-7)?;
            let key = match cross.raw {
                Raw::Nil(k) => k,
                other => return Err(Error::Numerical(format!("calibration crossing is not a nilcone point: {other:?}"))),
            };
            let w = adjacency_label(spec, j0, j1)
                .ok_or_else(|| Error::Numerical(format!("no orbit joins l{j0} and l{j1}")))?;
            match table.iter().find(|(k, _)| *k == key) {
                Some((_, existing)) if *existing != w => {
                    return Err(Error::Numerical("calibration assigned two labels to one key".into()))
                }
                Some(_) => {}
                None => table.push((key, w)),
            }
        }
    }
    let cal = Arc::new(Calibration { table });
    calibration_cache().lock().unwrap().insert(spec, cal.clone());
    Ok(cal)
}

fn label_of(spec: GroupSpec, p: &ModelPoint, inv: &Invariants) -> Result<OrbitLabel> {
    Ok(match inv.raw {
        Raw::Z1 => OrbitLabel::SingularZ1,
        Raw::Z2 => OrbitLabel::SingularZ2,
        Raw::Z3OrW5 => {
            if spec.family == Family::SU && spec.n >= 2 && orbit_tangent_rank(spec, p) + 1 >= spec.real_dim() {
                OrbitLabel::NonClosed(5)
            } else {
                OrbitLabel::SingularZ3
            }
        }
        Raw::Principal(j, param) => OrbitLabel::Principal { slice: j, param },
        Raw::Nil(key) => {
            let cal = nilcone_calibration(spec)?;
            match cal.lookup(key) {
                Some(w) => OrbitLabel::NonClosed(w),
                None => {
                    return Err(Error::Unclassifiable { residual: 0.0, nearest: format!("uncalibrated nilcone key {key:?}") })
                }
            }
        }
    })
}

/// Orbit label only (no rank in the report); used by membership tests.
pub fn classify_label(spec: GroupSpec, p: &ModelPoint) -> Result<OrbitLabel> {
    if p.spec != spec {
        return Err(Error::SpecMismatch("point belongs to another spec".into()));
    }
    let inv = invariants(spec, p, SIGN_TOL)?;
    label_of(spec, p, &inv)
}

pub fn classify_point(spec: GroupSpec, p: &ModelPoint) -> Result<ClassifyReport> {
    classify_point_with(spec, p, SIGN_TOL)
}

pub fn classify_point_with(spec: GroupSpec, p: &ModelPoint, tol: f64) -> Result<ClassifyReport> {
    if p.spec != spec {
        return Err(Error::SpecMismatch("point belongs to another spec".into()));
    }
    let inv = invariants(spec, p, tol)?;
    let label = label_of(spec, p, &inv)?;
    let (slice, param) = match label {
        OrbitLabel::Principal { slice, param } => (Some(slice), Some(param)),
        _ => (None, None),
    };
    Ok(ClassifyReport {
        label,
        label_text: label.to_string(),
        slice,
        param,
        f: inv.f,
        s_z: inv.s_z,
        s_w: inv.s_w,
        rank: orbit_tangent_rank(spec, p),
        residual: point_residual(p),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DomainId {
    D1(f64),
    D2(f64),
    S1(f64),
    S2(f64),
    W11,
    W12,
    W21,
    W22,
    /// A single non-closed orbit, only meaningful inside a union.
    Orbit(u8),
    Union(Vec<DomainId>),
}

impl fmt::Display for DomainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainId::D1(a) => write!(f, "D1({a})"),
            DomainId::D2(a) => write!(f, "D2({a})"),
            DomainId::S1(b) => write!(f, "S1({b})"),
            DomainId::S2(b) => write!(f, "S2({b})"),
            DomainId::W11 => write!(f, "W11"),
            DomainId::W12 => write!(f, "W12"),
            DomainId::W21 => write!(f, "W21"),
            DomainId::W22 => write!(f, "W22"),
            DomainId::Orbit(k) => write!(f, "G.w{k}"),
            DomainId::Union(v) => {
                let parts: Vec<String> = v.iter().map(|d| d.to_string()).collect();
                write!(f, "{}", parts.join(" u "))
            }
        }
    }
}

fn validate_domain(spec: GroupSpec, d: &DomainId) -> Result<()> {
    let bad = || Err(Error::DomainNotInFamily(d.to_string()));
    match d {
        DomainId::D1(a) | DomainId::D2(a) if !(0.0..1.0).contains(a) => bad(),
        DomainId::S1(b) | DomainId::S2(b) if !(*b >= 0.0 && b.is_finite()) => bad(),
        DomainId::W11 | DomainId::W12 if spec.family != Family::SU => bad(),
        DomainId::W21 | DomainId::W22 if !(spec.family == Family::SU && spec.n == 1) => bad(),
        DomainId::Orbit(k) if !crate::models::w_indices(spec).contains(k) => bad(),
        DomainId::Union(v) => v.iter().try_for_each(|x| validate_domain(spec, x)),
        _ => Ok(()),
    }
}

/// Pointwise membership.
pub fn domain_contains(spec: GroupSpec, d: &DomainId, p: &ModelPoint) -> Result<bool> {
    validate_domain(spec, d)?;
    contains_unchecked(spec, d, p)
}

fn contains_unchecked(spec: GroupSpec, d: &DomainId, p: &ModelPoint) -> Result<bool> {
    let signs = || -> Result<(f64, f64, f64)> {
        let (z, w) = p.zw().ok_or_else(|| Error::SpecMismatch("pair point expected".into()))?;
        let zn = z / cr(vnorm(z));
        let wn = w / cr(vnorm(w));
        Ok((
            hermitian_pairing(&zn, &zn)?.re,
            hermitian_pairing(&wn, &wn)?.re,
            hermitian_pairing(&zn, &wn)?.norm(),
        ))
    };
    match d {
        DomainId::W11 | DomainId::W12 | DomainId::W21 | DomainId::W22 => {
            let (h1, h2, pr) = signs()?;
            if pr <= 1e-12 {
                return Ok(false);
            }
            Ok(match d {
                DomainId::W11 => h1 < 0.0,
                DomainId::W12 => h2 < 0.0,
                DomainId::W21 => h2 > 0.0,
                _ => h1 > 0.0,
            })
        }
        DomainId::Union(v) => {
            for x in v {
                if contains_unchecked(spec, x, p)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => {
            let label = match classify_label(spec, p) {
                Ok(l) => l,
                Err(Error::IncidenceDivisor) => return Ok(false),
                Err(e) => return Err(e),
            };
            let s2_slice = if spec.family == Family::SO0 && spec.n > 2 { 2 } else { 4 };
            Ok(match (d, label) {
                (DomainId::D1(_), OrbitLabel::SingularZ1) => true,
                (DomainId::D2(_), OrbitLabel::SingularZ3) => true,
                (DomainId::D1(a), OrbitLabel::Principal { slice: 1, param }) => param > *a,
                (DomainId::D2(a), OrbitLabel::Principal { slice: 3, param }) => param > *a,
                (DomainId::S1(b), OrbitLabel::Principal { slice: 2, param }) => param > *b,
                (DomainId::S2(b), OrbitLabel::Principal { slice, param }) if slice == s2_slice => param > *b,
                (DomainId::Orbit(k), OrbitLabel::NonClosed(w)) => *k == w,
                _ => false,
            })
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitDiagram {
    pub id: u8,
    pub nodes: Vec<String>,
    /// Non-closed orbit -> closed orbits in its closure.
    pub closure_edges: Vec<(String, Vec<String>)>,
    /// `(w index, (slice a, slice b))`: the orbit separating the two slices.
    pub slice_adjacency: Vec<(u8, (u8, u8))>,
    /// Diagram (10) has no matrix model here.
    pub catalog_only: bool,
}

pub fn orbit_diagram(id: DiagramId) -> OrbitDiagram {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let z2 = || vec!["z2".to_string()];
    let z3 = || vec!["z3".to_string()];
    match id {
        DiagramId::D3 => OrbitDiagram {
            id: 3,
            nodes: s(&["z1", "z2", "z3", "w1", "w2", "w3", "w4", "l1", "l2", "l3", "l4"]),
            closure_edges: (1..=4).map(|k| (format!("w{k}"), z2())).collect(),
            slice_adjacency: vec![(1, (1, 2)), (2, (3, 2)), (3, (3, 4)), (4, (1, 4))],
            catalog_only: false,
        },
        DiagramId::D4 => OrbitDiagram {
            id: 4,
            nodes: s(&["z1", "z2", "z3", "w1", "w2", "l1", "l2", "l3"]),
            closure_edges: (1..=2).map(|k| (format!("w{k}"), z2())).collect(),
            slice_adjacency: vec![(1, (1, 2)), (2, (3, 2))],
            catalog_only: false,
        },
        DiagramId::D9 => OrbitDiagram {
            id: 9,
            nodes: s(&["z1", "z2", "z3", "w1", "w2", "w3", "w4", "w5", "l1", "l2", "l3", "l4", "l5"]),
            closure_edges: (1..=4).map(|k| (format!("w{k}"), z2())).chain([("w5".to_string(), z3())]).collect(),
            slice_adjacency: vec![(1, (1, 2)), (2, (3, 2)), (3, (3, 4)), (4, (1, 4)), (5, (3, 5))],
            catalog_only: false,
        },
        DiagramId::D10 => OrbitDiagram {
            id: 10,
            nodes: s(&["z1", "z2", "z3", "w1", "w2", "w5", "l1", "l2", "l3", "l5"]),
            closure_edges: vec![("w1".into(), z2()), ("w2".into(), z2()), ("w5".into(), z3())],
            slice_adjacency: vec![(1, (1, 2)), (2, (3, 2)), (5, (3, 5))],
            catalog_only: true,
        },
    }
}

/// Level function whose zero set is sampled by [`level_set_samples`].
fn sampling_level(anchor: RepKind, p: &ModelPoint) -> Result<f64> {
    let f = invariant_f(p)?;
    Ok(if anchor == RepKind::Z3 { 1.0 + f } else { f })
}

fn perturbed(base: &ModelPoint, radius: f64, rng: &mut crate::rng::Rng) -> Result<ModelPoint> {
    use rand::Rng as _;
    let amb = base.ambient();
    let scale = radius * vnorm(&amb);
    let v = CVec::from_fn(amb.len(), |i, _| {
        amb[i] + C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
    });
    onto_model(base.spec, &v)
}

/// Pulls an ambient vector back onto the model: rescaling onto the quadric, or reading off a pair.
fn onto_model(spec: GroupSpec, v: &CVec) -> Result<ModelPoint> {
    match spec.family {
        Family::SO0 => {
            let last = v.len() - 1;
            let mut q = C64::new(0.0, 0.0);
            for i in 0..v.len() {
                q += if i == last { -v[i] * v[i] } else { v[i] * v[i] };
            }
            let k = (-cr(1.0) / q).sqrt();
            ModelPoint::quadric(spec, v * k)
        }
        Family::SU => ModelPoint::from_ambient(spec, v),
    }
}

/// Points of the level set `f = 0` near `z2`, or of `1 + f = 0` near `z3`.
///
/// Each sample is obtained by drawing two perturbations of the anchor at which the
/// level function has opposite signs and bisecting along the ambient segment
/// joining them.
pub fn level_set_samples(
    spec: GroupSpec,
    anchor: RepKind,
    count: usize,
    radius: f64,
    rng: &mut crate::rng::Rng,
) -> Result<Vec<ModelPoint>> {
    match anchor {
        RepKind::Z2 => {}
        RepKind::Z3 if spec.family == Family::SU && spec.n >= 2 => {}
        _ => return Err(Error::SpecMismatch(format!("no level-set sampler anchored at {anchor} for {:?}({},1)", spec.family, spec.n))),
    }
    let base = crate::models::representative_point(spec, anchor)?;
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 50 * count + 100 {
            return Err(Error::Numerical(format!("level-set sampler produced {} of {count} points", out.len())));
        }
        let a = perturbed(&base, radius, rng)?;
        let b = perturbed(&base, radius, rng)?;
        let (fa, fb) = match (sampling_level(anchor, &a), sampling_level(anchor, &b)) {
            (Ok(x), Ok(y)) => (x, y),
            _ => continue,
        };
        if fa * fb >= 0.0 {
            continue;
        }
        let (va, vb) = (a.ambient(), b.ambient());
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut p = a.clone();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            p = onto_model(spec, &(&va * cr(1.0 - mid) + &vb * cr(mid)))?;
            let fm = sampling_level(anchor, &p)?;
            if fm == 0.0 || hi - lo < 1e-17 {
                break;
            }
            if fm * fa > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{printed_representative, representative_point, RepKind};

    #[test]
    fn pairing_examples() {
        let a = CVec::from_vec(vec![cr(0.0), cr(1.0)]);
        assert_eq!(hermitian_pairing(&a, &a).unwrap(), cr(-1.0));
        let e1 = CVec::from_vec(vec![cr(1.0), cr(0.0)]);
        assert_eq!(hermitian_pairing(&e1, &e1).unwrap(), cr(1.0));
        let z = CVec::from_vec(vec![I, cr(1.0)]);
        let w = CVec::from_vec(vec![-I, cr(1.0)]);
        assert!((hermitian_pairing(&z, &w).unwrap() - cr(-2.0)).norm() < 1e-15);
        assert!(hermitian_pairing(&a, &CVec::zeros(3)).is_err());
    }

    #[test]
    fn f_at_base_points() {
        let so = GroupSpec::so0(3).unwrap();
        assert!((invariant_f(&representative_point(so, RepKind::Z1).unwrap()).unwrap() + 2.0).abs() < 1e-15);
        assert!(invariant_f(&representative_point(so, RepKind::Z2).unwrap()).unwrap().abs() < 1e-15);
        let su = GroupSpec::su(2).unwrap();
        for &s in &[0.1, 0.5, 1.3] {
            let p = slice_point(su, SliceId::new(5), s).unwrap();
            let want = -(2.0 * s).cosh().powi(2);
            assert!((invariant_f(&p).unwrap() - want).abs() < 1e-12 * want.abs());
        }
    }

    #[test]
    fn closed_forms_of_f_on_slices() {
        for spec in [GroupSpec::so0(2).unwrap(), GroupSpec::so0(3).unwrap()] {
            for &t in &[0.1, 0.4, 0.9] {
                let v = invariant_f(&slice_point(spec, SliceId::new(1), t).unwrap()).unwrap();
                assert!((v + 2.0 * (PI / 2.0 * (1.0 - t)).cos().powi(2)).abs() < 1e-13);
                let v = invariant_f(&slice_point(spec, SliceId::new(2), t).unwrap()).unwrap();
                assert!((v - 2.0 * (2.0 * t).sinh().powi(2)).abs() < 1e-13);
            }
        }
        let su = GroupSpec::su(2).unwrap();
        for &t in &[0.1, 0.4, 0.9] {
            let v = invariant_f(&slice_point(su, SliceId::new(1), t).unwrap()).unwrap();
            assert!((v + (PI / 2.0 * (1.0 - t)).cos().powi(2)).abs() < 1e-13);
            let v = invariant_f(&slice_point(su, SliceId::new(2), t).unwrap()).unwrap();
            assert!((v - (2.0 * t).sinh().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_examples() {
        let so = GroupSpec::so0(2).unwrap();
        assert_eq!(orbit_tangent_rank(so, &representative_point(so, RepKind::Z1).unwrap()), 2);
        assert_eq!(orbit_tangent_rank(so, &representative_point(so, RepKind::W(1)).unwrap()), 3);
        let su = GroupSpec::su(2).unwrap();
        assert_eq!(orbit_tangent_rank(su, &representative_point(su, RepKind::Z3).unwrap()), 4);
        assert_eq!(orbit_tangent_rank(su, &representative_point(su, RepKind::W(5)).unwrap()), 7);
    }

    #[test]
    fn classification_examples() {
        let so = GroupSpec::so0(3).unwrap();
        let r = classify_point(so, &slice_point(so, SliceId::new(1), 0.4).unwrap()).unwrap();
        match r.label {
            OrbitLabel::Principal { slice: 1, param } => assert!((param - 0.4).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        let su = GroupSpec::su(2).unwrap();
        let r = classify_point(su, &printed_representative(su, RepKind::W(5)).unwrap()).unwrap();
        assert_eq!(r.label, OrbitLabel::NonClosed(5));
        let r = classify_point(su, &printed_representative(su, RepKind::Z3).unwrap()).unwrap();
        assert_eq!(r.label, OrbitLabel::SingularZ3);
    }

    #[test]
    fn calibration_tables_are_frozen() {
        // SO0(2,1): the printed w1 and w3 trade places under calibration
        let so2 = GroupSpec::so0(2).unwrap();
        let expect = [(1u8, 3u8), (2, 2), (3, 1), (4, 4)];
        for (printed, calibrated) in expect {
            let p = printed_representative(so2, RepKind::W(printed)).unwrap();
            assert_eq!(classify_label(so2, &p).unwrap(), OrbitLabel::NonClosed(calibrated), "printed w{printed}");
        }
        // SU: the printed representatives carry their own labels
        for spec in [GroupSpec::su(1).unwrap(), GroupSpec::su(2).unwrap()] {
            for k in 1..=4u8 {
                let p = printed_representative(spec, RepKind::W(k)).unwrap();
                assert_eq!(classify_label(spec, &p).unwrap(), OrbitLabel::NonClosed(k));
            }
        }
        // SO0(n>2): both printed points are past-null and land on w2
        let so4 = GroupSpec::so0(4).unwrap();
        for k in 1..=2u8 {
            let p = printed_representative(so4, RepKind::W(k)).unwrap();
            assert_eq!(classify_label(so4, &p).unwrap(), OrbitLabel::NonClosed(2));
        }
        assert_eq!(nilcone_calibration(so4).unwrap().table.len(), 2);
        assert_eq!(nilcone_calibration(so2).unwrap().table.len(), 4);
    }

    #[test]
    fn membership_examples() {
        let su1 = GroupSpec::su(1).unwrap();
        assert!(domain_contains(su1, &DomainId::W11, &representative_point(su1, RepKind::Z1).unwrap()).unwrap());
        let su2 = GroupSpec::su(2).unwrap();
        let l2 = slice_point(su2, SliceId::new(2), 0.7).unwrap();
        assert!(domain_contains(su2, &DomainId::S1(0.0), &l2).unwrap());
        assert!(domain_contains(su2, &DomainId::W11, &l2).unwrap());
        let so3 = GroupSpec::so0(3).unwrap();
        assert!(!domain_contains(so3, &DomainId::D1(0.0), &slice_point(so3, SliceId::new(3), 0.5).unwrap()).unwrap());
        assert!(domain_contains(so3, &DomainId::W11, &l2).is_err());
        assert!(domain_contains(su2, &DomainId::W21, &l2).is_err());
    }
}

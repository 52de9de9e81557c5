//! The hyperquadric model (SO0) and the projective-pair model (SU).
//!
//! SU points are stored as homogeneous pairs `(z, w)`. The second factor
//! carries the conjugate complex structure, so holomorphic ambient
//! coordinates are `(z, conj(w))`; see [`ModelPoint::ambient`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_core::{expm, involution_grp_matrix, standard_generators, Family, GroupSpec, GrpElement, Involution};
use crate::linalg::*;

pub const MAX_SLICE_PARAM: f64 = 20.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Coords {
    Quadric(CVec),
    Pair { z: CVec, w: CVec },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelPoint {
    pub spec: GroupSpec,
    pub coords: Coords,
}

impl ModelPoint {
    pub fn quadric(spec: GroupSpec, xi: CVec) -> Result<Self> {
        if spec.family != Family::SO0 {
            return Err(Error::SpecMismatch("hyperquadric points belong to the SO0 family".into()));
        }
        if xi.len() != spec.size() {
            return Err(Error::SpecMismatch(format!("expected {} coordinates", spec.size())));
        }
        Ok(ModelPoint { spec, coords: Coords::Quadric(xi) })
    }

    pub fn pair(spec: GroupSpec, z: CVec, w: CVec) -> Result<Self> {
        if spec.family != Family::SU {
            return Err(Error::SpecMismatch("projective pairs belong to the SU family".into()));
        }
        if z.len() != spec.size() || w.len() != spec.size() {
            return Err(Error::SpecMismatch(format!("expected {} homogeneous coordinates", spec.size())));
        }
        if vnorm(&z) == 0.0 || vnorm(&w) == 0.0 {
            return Err(Error::SpecMismatch("homogeneous vectors must be nonzero".into()));
        }
        Ok(ModelPoint { spec, coords: Coords::Pair { z, w } })
    }

    pub fn xi(&self) -> Option<&CVec> {
        match &self.coords {
            Coords::Quadric(x) => Some(x),
            _ => None,
        }
    }

    pub fn zw(&self) -> Option<(&CVec, &CVec)> {
        match &self.coords {
            Coords::Pair { z, w } => Some((z, w)),
            _ => None,
        }
    }

    /// Holomorphic ambient coordinates: `xi`, or `(z, conj w)` stacked.
    pub fn ambient(&self) -> CVec {
        match &self.coords {
            Coords::Quadric(x) => x.clone(),
            Coords::Pair { z, w } => {
                let n1 = z.len();
                CVec::from_fn(2 * n1, |i, _| if i < n1 { z[i] } else { w[i - n1].conj() })
            }
        }
    }

    pub fn from_ambient(spec: GroupSpec, v: &CVec) -> Result<Self> {
        match spec.family {
            Family::SO0 => ModelPoint::quadric(spec, v.clone()),
            Family::SU => {
                let n1 = spec.size();
                if v.len() != 2 * n1 {
                    return Err(Error::SpecMismatch("ambient vector has wrong length".into()));
                }
                let z = CVec::from_fn(n1, |i, _| v[i]);
                let w = CVec::from_fn(n1, |i, _| v[i + n1].conj());
                ModelPoint::pair(spec, z, w)
            }
        }
    }

    /// Canonical representative: unit vectors with the largest-modulus entry real positive.
    pub fn normalized(&self) -> ModelPoint {
        match &self.coords {
            Coords::Quadric(_) => self.clone(),
            Coords::Pair { z, w } => ModelPoint {
                spec: self.spec,
                coords: Coords::Pair { z: normalize_projective(z), w: normalize_projective(w) },
            },
        }
    }

    /// Distance used for equality tests: Euclidean on the quadric, chordal on each projective factor.
    pub fn distance(&self, other: &ModelPoint) -> f64 {
        match (&self.coords, &other.coords) {
            (Coords::Quadric(a), Coords::Quadric(b)) => vnorm(&(a - b)),
            (Coords::Pair { z: z1, w: w1 }, Coords::Pair { z: z2, w: w2 }) => {
                chordal(z1, z2).max(chordal(w1, w2))
            }
            _ => f64::INFINITY,
        }
    }
}

/// `sqrt(1 - |<a,b>|^2 / (|a|^2 |b|^2))`, computed without cancellation.
pub fn chordal(a: &CVec, b: &CVec) -> f64 {
    let an = a / cr(vnorm(a));
    let bn = b / cr(vnorm(b));
    let ip = an.dotc(&bn);
    let phase = if ip.norm() > 0.0 { ip / cr(ip.norm()) } else { cr(1.0) };
    // distance between an and bn after optimal phase alignment, then map to sine
    let d = vnorm(&(&bn - &an * phase));
    d * (1.0 - d * d / 4.0).max(0.0).sqrt()
}

pub fn normalize_projective(v: &CVec) -> CVec {
    let nn = vnorm(v);
    let u = v / cr(nn);
    let maxmod = u.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let k = u.iter().position(|x| x.norm() >= maxmod * (1.0 - 1e-9)).unwrap_or(0);
    let ph = u[k].conj() / cr(u[k].norm());
    u * ph
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RepKind {
    Z1,
    Z2,
    Z3,
    W(u8),
}

impl std::fmt::Display for RepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RepKind::Z1 => write!(f, "z1"),
            RepKind::Z2 => write!(f, "z2"),
            RepKind::Z3 => write!(f, "z3"),
            RepKind::W(k) => write!(f, "w{k}"),
        }
    }
}

/// Indices of the non-closed orbits present in the diagram of `spec`.
pub fn w_indices(spec: GroupSpec) -> Vec<u8> {
    match (spec.family, spec.n) {
        (Family::SO0, 2) | (Family::SU, 1) => vec![1, 2, 3, 4],
        (Family::SO0, _) => vec![1, 2],
        (Family::SU, _) => vec![1, 2, 3, 4, 5],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceId {
    pub j: u8,
    pub extended: bool,
}

impl SliceId {
    pub fn new(j: u8) -> Self {
        SliceId { j, extended: false }
    }

    pub fn extended(j: u8) -> Self {
        SliceId { j, extended: true }
    }
}

fn vec_from(vals: &[C64]) -> CVec {
    CVec::from_vec(vals.to_vec())
}

/// `[0 : ... : 0 : a : b]` or `[0 : ... : a : b : c]` padded to length `n1`.
fn tail(n1: usize, vals: &[C64]) -> CVec {
    let mut v = CVec::zeros(n1);
    let off = n1 - vals.len();
    for (k, x) in vals.iter().enumerate() {
        v[off + k] = *x;
    }
    v
}

fn su_pair(spec: GroupSpec, z: &[C64], w: &[C64]) -> ModelPoint {
    let n1 = spec.size();
    ModelPoint { spec, coords: Coords::Pair { z: tail(n1, z), w: tail(n1, w) } }
}

fn quad(spec: GroupSpec, vals: &[C64]) -> ModelPoint {
    ModelPoint { spec, coords: Coords::Quadric(tail(spec.size(), vals)) }
}

/// Literal coordinates of the printed representatives.
pub fn printed_representative(spec: GroupSpec, kind: RepKind) -> Result<ModelPoint> {
    let o = cr(0.0);
    let one = cr(1.0);
    let m1 = cr(-1.0);
    let bad = || Error::LabelNotInDiagram(kind.to_string());
    match spec.family {
        Family::SO0 => {
            let n1 = spec.size();
            match kind {
                RepKind::Z1 => Ok(quad(spec, &[one])),
                RepKind::Z2 => Ok(quad(spec, &[I, o])),
                RepKind::Z3 => Ok(quad(spec, &[m1])),
                RepKind::W(k) if spec.n == 2 => {
                    let v = match k {
                        1 => [m1, I, m1],
                        2 => [one, I, m1],
                        3 => [one, I, one],
                        4 => [m1, I, one],
                        _ => return Err(bad()),
                    };
                    Ok(quad(spec, &v))
                }
                RepKind::W(k) => {
                    let first = match k {
                        1 => m1,
                        2 => one,
                        _ => return Err(bad()),
                    };
                    let mut v = CVec::zeros(n1);
                    v[0] = first;
                    v[n1 - 2] = I;
                    v[n1 - 1] = m1;
                    Ok(ModelPoint { spec, coords: Coords::Quadric(v) })
                }
            }
        }
        Family::SU => match kind {
            RepKind::Z1 => Ok(su_pair(spec, &[one], &[one])),
            RepKind::Z2 => Ok(su_pair(spec, &[I, one], &[-I, one])),
            RepKind::Z3 => Ok(su_pair(spec, &[one, o], &[one, o])),
            RepKind::W(1) => Ok(su_pair(spec, &[o, one], &[-I, one])),
            RepKind::W(2) => Ok(su_pair(spec, &[I, one], &[one, o])),
            RepKind::W(3) => Ok(su_pair(spec, &[one, o], &[-I, one])),
            RepKind::W(4) => Ok(su_pair(spec, &[I, one], &[o, one])),
            RepKind::W(5) if spec.n >= 2 => Ok(su_pair(spec, &[one, -I, one], &[one, I, one])),
            _ => Err(bad()),
        },
    }
}

/// Candidate nilcone points: the printed ones and their images under `x_{n+1} -> -x_{n+1}`.
pub(crate) fn nilcone_candidates(spec: GroupSpec) -> Vec<ModelPoint> {
    let mut out = Vec::new();
    for k in 1..=5u8 {
        if let Ok(p) = printed_representative(spec, RepKind::W(k)) {
            if let Coords::Quadric(x) = &p.coords {
                let mut y = x.clone();
                let last = y.len() - 1;
                y[last] = -y[last];
                out.push(ModelPoint { spec, coords: Coords::Quadric(y) });
            }
            out.push(p);
        }
    }
    out
}

/// Representative point whose orbit carries the given (calibrated) label.
///
/// Singular orbits use the printed coordinates. Non-closed orbits are picked
/// from the printed candidates by classification, so the label always agrees
/// with [`crate::orbits::classify_point`].
pub fn representative_point(spec: GroupSpec, kind: RepKind) -> Result<ModelPoint> {
    match kind {
        RepKind::Z1 | RepKind::Z2 | RepKind::Z3 => printed_representative(spec, kind),
        RepKind::W(k) => {
            if !w_indices(spec).contains(&k) {
                return Err(Error::LabelNotInDiagram(kind.to_string()));
            }
            for p in nilcone_candidates(spec) {
                if let Ok(rep) = crate::orbits::classify_point(spec, &p) {
                    if rep.label == crate::orbits::OrbitLabel::NonClosed(k) {
                        return Ok(p);
                    }
                }
            }
            Err(Error::LabelNotInDiagram(kind.to_string()))
        }
    }
}

fn check_param(spec: GroupSpec, slice: SliceId, param: f64) -> Result<f64> {
    let err = || Error::ParamOutOfDomain { what: format!("slice l{}", slice.j), param };
    if !param.is_finite() {
        return Err(err());
    }
    match slice.j {
        1 | 3 => {
            let upper_ok = if slice.extended { param <= 1.0 } else { param < 1.0 };
            if param > 0.0 && upper_ok {
                Ok(param)
            } else {
                Err(err())
            }
        }
        2 | 4 => {
            if param > 0.0 {
                Ok(param.min(MAX_SLICE_PARAM))
            } else {
                Err(err())
            }
        }
        5 if spec.family == Family::SU && spec.n >= 2 => {
            if param > 0.0 {
                Ok(param.min(MAX_SLICE_PARAM))
            } else {
                Err(err())
            }
        }
        _ => Err(err()),
    }
}

/// Slice point from the explicit coordinate formulas.
///
/// Parameters of the non-compact slices are clamped to `(0, 20]`.
pub fn slice_point(spec: GroupSpec, slice: SliceId, param: f64) -> Result<ModelPoint> {
    let p = check_param(spec, slice, param)?;
    let o = cr(0.0);
    match spec.family {
        Family::SO0 => Ok(match slice.j {
            1 | 3 => {
                let th = if slice.j == 1 { PI / 2.0 * (1.0 - p) } else { PI / 2.0 * (1.0 + p) };
                quad(spec, &[I * th.sin(), cr(th.cos())])
            }
            _ => {
                let sgn = if slice.j == 2 { 1.0 } else { -1.0 };
                let s2 = 2.0 * p;
                quad(spec, &[cr(sgn * s2.sinh()), I * s2.cosh(), o])
            }
        }),
        Family::SU => Ok(match slice.j {
            1 | 3 => {
                let th = if slice.j == 1 { PI / 4.0 * (1.0 - p) } else { PI / 4.0 * (1.0 + p) };
                let (s, c) = th.sin_cos();
                su_pair(spec, &[I * s, cr(c)], &[-I * s, cr(c)])
            }
            2 => su_pair(spec, &[I * (-p).exp(), cr(p.exp())], &[-I * p.exp(), cr((-p).exp())]),
            4 => su_pair(spec, &[I * p.exp(), cr((-p).exp())], &[-I * (-p).exp(), cr(p.exp())]),
            _ => su_pair(spec, &[cr(p.sinh()), I * p.cosh(), o], &[cr(p.sinh()), -I * p.cosh(), o]),
        }),
    }
}

/// Slice point as an exponential applied to `z2` (or `z3` for the fifth slice).
pub fn slice_point_exp(spec: GroupSpec, slice: SliceId, param: f64) -> Result<ModelPoint> {
    let p = check_param(spec, slice, param)?;
    let gens = standard_generators(spec);
    let (gen, sign, base) = match (spec.family, slice.j) {
        (_, 1) => (gens.a2.clone(), -1.0, RepKind::Z2),
        (_, 3) => (gens.a2.clone(), 1.0, RepKind::Z2),
        (Family::SO0, 2) => (gens.c.clone().unwrap(), 1.0, RepKind::Z2),
        (Family::SO0, _) => (gens.c.clone().unwrap(), -1.0, RepKind::Z2),
        (Family::SU, 2) => (gens.c_prime.clone().unwrap(), 1.0, RepKind::Z2),
        (Family::SU, 4) => (gens.c_prime.clone().unwrap(), -1.0, RepKind::Z2),
        (Family::SU, _) => (gens.c.clone().unwrap(), 1.0, RepKind::Z3),
    };
    let g = expm(&(gen * (I * (sign * p))));
    let b = printed_representative(spec, base)?;
    Ok(act_matrix(spec, &g, &b))
}

/// Linear action of a (possibly complexified) group matrix.
pub fn act_matrix(spec: GroupSpec, g: &CMat, p: &ModelPoint) -> ModelPoint {
    match &p.coords {
        Coords::Quadric(x) => ModelPoint { spec, coords: Coords::Quadric(g * x) },
        Coords::Pair { z, w } => {
            let sg = involution_grp_matrix(spec, Involution::Sigma, g);
            ModelPoint { spec, coords: Coords::Pair { z: g * z, w: sg * w } }
        }
    }
}

pub fn group_action(g: &GrpElement, p: &ModelPoint) -> Result<ModelPoint> {
    if g.spec != p.spec {
        return Err(Error::SpecMismatch(format!("{} acting on a {} point", g.spec.label(), p.spec.label())));
    }
    Ok(act_matrix(p.spec, &g.m, p))
}

/// Infinitesimal action of `x` in holomorphic ambient coordinates.
pub fn alg_action_ambient(spec: GroupSpec, x: &CMat, p: &ModelPoint) -> CVec {
    match &p.coords {
        Coords::Quadric(xi) => x * xi,
        Coords::Pair { z, w } => {
            let e = spec.metric();
            let wt = conj_vec(w);
            let top = x * z;
            let bot = -(&e * x.transpose() * &e * wt);
            let n1 = z.len();
            CVec::from_fn(2 * n1, |i, _| if i < n1 { top[i] } else { bot[i - n1] })
        }
    }
}

/// `count` points `exp(Y) p` with `Y` random in the real form, `|Y| <= max_norm`.
pub fn random_translates<R: rand::Rng + ?Sized>(
    p: &ModelPoint,
    count: usize,
    max_norm: f64,
    rng: &mut R,
) -> Vec<ModelPoint> {
    let alg = crate::lie_core::LieAlgebra::new(p.spec);
    (0..count)
        .map(|_| {
            let g = expm(&alg.random_element(rng, max_norm));
            act_matrix(p.spec, &g, p)
        })
        .collect()
}

/// Model-invariant defect: quadric equation residual, or pairing deficiency.
pub fn point_residual(p: &ModelPoint) -> f64 {
    match &p.coords {
        Coords::Quadric(x) => {
            let n1 = x.len();
            let mut q = cr(1.0);
            for i in 0..n1 {
                let s = if i + 1 == n1 { -1.0 } else { 1.0 };
                q += x[i] * x[i] * s;
            }
            q.norm()
        }
        Coords::Pair { z, w } => {
            let nz = vnorm(z);
            let nw = vnorm(w);
            if nz == 0.0 || nw == 0.0 {
                return f64::INFINITY;
            }
            let pr = crate::orbits::hermitian_pairing(z, w).map(|v| v.norm() / (nz * nw)).unwrap_or(0.0);
            let floor = 1e-9;
            ((floor - pr) / floor).max(0.0)
        }
    }
}

#[allow(dead_code)]
pub(crate) fn cvec(vals: &[C64]) -> CVec {
    vec_from(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::LieAlgebra;
    use rand::SeedableRng;

    #[test]
    fn printed_examples() {
        let so3 = GroupSpec::so0(3).unwrap();
        let z2 = representative_point(so3, RepKind::Z2).unwrap();
        assert_eq!(z2.xi().unwrap().as_slice(), &[cr(0.0), cr(0.0), I, cr(0.0)]);
        let su2 = GroupSpec::su(2).unwrap();
        let w5 = representative_point(su2, RepKind::W(5)).unwrap();
        let (z, w) = w5.zw().unwrap();
        assert_eq!(z.as_slice(), &[cr(0.0), cr(1.0), -I, cr(1.0)][1..]);
        assert_eq!(w.as_slice(), &[cr(1.0), I, cr(1.0)]);
        let su1 = GroupSpec::su(1).unwrap();
        let z1 = representative_point(su1, RepKind::Z1).unwrap();
        assert_eq!(z1.zw().unwrap().0.as_slice(), &[cr(0.0), cr(1.0)]);
        assert!(representative_point(so3, RepKind::W(3)).is_err());
        assert!(representative_point(su1, RepKind::W(5)).is_err());
    }

    #[test]
    fn slice_examples() {
        let so2 = GroupSpec::so0(2).unwrap();
        let p = slice_point(so2, SliceId::new(2), 0.5).unwrap();
        let x = p.xi().unwrap();
        assert!((x[0] - cr(1f64.sinh())).norm() < 1e-14);
        assert!((x[1] - I * 1f64.cosh()).norm() < 1e-14);
        assert!(x[2].norm() < 1e-14);
        let so3 = GroupSpec::so0(3).unwrap();
        let z1 = slice_point(so3, SliceId::extended(1), 1.0).unwrap();
        assert!(z1.distance(&representative_point(so3, RepKind::Z1).unwrap()) < 1e-15);
        let su2 = GroupSpec::su(2).unwrap();
        let l5 = slice_point(su2, SliceId::new(5), 0.3).unwrap();
        let (z, w) = l5.zw().unwrap();
        assert!((z[0] - cr(0.3f64.sinh())).norm() < 1e-15 && (z[1] - I * 0.3f64.cosh()).norm() < 1e-15);
        assert!((w[1] + I * 0.3f64.cosh()).norm() < 1e-15);
        assert!(slice_point(su2, SliceId::new(1), 1.0).is_err());
        assert!(slice_point(GroupSpec::su(1).unwrap(), SliceId::new(5), 0.3).is_err());
    }

    #[test]
    fn exp_forms_match_closed_forms() {
        for spec in [GroupSpec::so0(2).unwrap(), GroupSpec::so0(4).unwrap(), GroupSpec::su(1).unwrap(), GroupSpec::su(3).unwrap()] {
            let js: Vec<u8> = if spec.family == Family::SU && spec.n >= 2 { vec![1, 2, 3, 4, 5] } else { vec![1, 2, 3, 4] };
            for j in js {
                for &t in &[0.05, 0.3, 0.5, 0.77, 0.95] {
                    let a = slice_point(spec, SliceId::new(j), t).unwrap();
                    let b = slice_point_exp(spec, SliceId::new(j), t).unwrap();
                    assert!(a.distance(&b) < 1e-10, "{} l{j}({t})", spec.label());
                }
            }
        }
    }

    #[test]
    fn residuals() {
        let so2 = GroupSpec::so0(2).unwrap();
        let z1 = representative_point(so2, RepKind::Z1).unwrap();
        assert_eq!(point_residual(&z1), 0.0);
        let p = slice_point(so2, SliceId::new(1), 0.4).unwrap();
        let mut xi = p.xi().unwrap().clone();
        let x1 = xi[0];
        xi[0] += cr(1e-3);
        let r = point_residual(&ModelPoint::quadric(so2, xi).unwrap());
        assert!((r - (x1 * 2e-3 + cr(1e-6)).norm()).abs() < 1e-15);
        let su1 = GroupSpec::su(1).unwrap();
        let bad = ModelPoint::pair(su1, CVec::from_vec(vec![cr(1.0), cr(1.0)]), CVec::from_vec(vec![cr(1.0), cr(1.0)])).unwrap();
        assert!(point_residual(&bad) > 0.5);
    }

    #[test]
    fn action_is_unital_and_preserves_residual() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for spec in [GroupSpec::so0(3).unwrap(), GroupSpec::su(2).unwrap()] {
            let alg = LieAlgebra::new(spec);
            let p = slice_point(spec, SliceId::new(2), 0.4).unwrap();
            let id = GrpElement::identity(spec);
            assert!(group_action(&id, &p).unwrap().distance(&p) < 1e-15);
            for _ in 0..50 {
                let g = GrpElement { spec, m: expm(&alg.random_element(&mut rng, 2.0)), realness: crate::lie_core::Realness::RealForm };
                let q = group_action(&g, &p).unwrap();
                assert!(point_residual(&q) <= point_residual(&p) + 1e-10 * vnorm(&q.ambient()).powi(2).max(1.0));
            }
        }
    }

    #[test]
    fn normalization_is_scale_invariant() {
        let su2 = GroupSpec::su(2).unwrap();
        let p = slice_point(su2, SliceId::new(3), 0.4).unwrap();
        let (z, w) = p.zw().unwrap();
        let q = ModelPoint::pair(su2, z * c(2.0, -3.0), w * c(-0.1, 0.4)).unwrap();
        let a = p.normalized();
        let b = q.normalized();
        let (za, wa) = a.zw().unwrap();
        let (zb, wb) = b.zw().unwrap();
        assert!(vnorm(&(za - zb)) < 1e-14 && vnorm(&(wa - wb)) < 1e-14);
    }
}

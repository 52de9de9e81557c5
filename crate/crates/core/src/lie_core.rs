//! Matrix Lie algebras so(n,1) and su(n,1) inside gl(n+1, C).
//!
//! Elements are stored as complex `(n+1) x (n+1)` matrices. The indefinite
//! metric is `E = diag(1, ..., 1, -1)`; the Cartan involution is conjugation
//! by `E`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    SO0,
    SU,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::SO0 => write!(f, "SO0"),
            Family::SU => write!(f, "SU"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SO0" | "SO" => Ok(Family::SO0),
            "SU" => Ok(Family::SU),
            other => Err(Error::InvalidSpec(format!("unknown family {other:?}"))),
        }
    }
}

/// Orbit diagram catalog ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiagramId {
    D3,
    D4,
    D9,
    D10,
}

impl DiagramId {
    pub fn number(self) -> u8 {
        match self {
            DiagramId::D3 => 3,
            DiagramId::D4 => 4,
            DiagramId::D9 => 9,
            DiagramId::D10 => 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub n: usize,
}

impl GroupSpec {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        let ok = match family {
            Family::SO0 => n >= 2,
            Family::SU => n >= 1,
        };
        if !ok {
            return Err(Error::InvalidSpec(format!("{family}({n},1) is not supported")));
        }
        Ok(GroupSpec { family, n })
    }

    pub fn so0(n: usize) -> Result<Self> {
        Self::new(Family::SO0, n)
    }

    pub fn su(n: usize) -> Result<Self> {
        Self::new(Family::SU, n)
    }

    /// Ambient matrix size `n + 1`.
    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn diagram(&self) -> DiagramId {
        match (self.family, self.n) {
            (Family::SO0, 2) => DiagramId::D3,
            (Family::SO0, _) => DiagramId::D4,
            (Family::SU, 1) => DiagramId::D3,
            (Family::SU, _) => DiagramId::D9,
        }
    }

    /// True when the restricted root system has no `2 alpha`.
    pub fn is_reduced(&self) -> bool {
        self.family == Family::SO0 || self.n == 1
    }

    pub fn dim_g(&self) -> usize {
        match self.family {
            Family::SO0 => self.n * (self.n + 1) / 2,
            Family::SU => self.n * self.n + 2 * self.n,
        }
    }

    pub fn dim_k(&self) -> usize {
        match self.family {
            Family::SO0 => self.n * (self.n - 1) / 2,
            Family::SU => self.n * self.n,
        }
    }

    /// Complex dimension of the model of `G^C / K^C`.
    pub fn complex_dim(&self) -> usize {
        match self.family {
            Family::SO0 => self.n,
            Family::SU => 2 * self.n,
        }
    }

    pub fn real_dim(&self) -> usize {
        2 * self.complex_dim()
    }

    /// The metric `E = I_{n,1}`.
    pub fn metric(&self) -> CMat {
        let n1 = self.size();
        CMat::from_fn(n1, n1, |i, j| {
            if i != j {
                cr(0.0)
            } else if i + 1 == n1 {
                cr(-1.0)
            } else {
                cr(1.0)
            }
        })
    }

    pub fn label(&self) -> String {
        format!("{}({},1)", self.family, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Realness {
    RealForm,
    Complexified,
}

fn tol_for(m: &CMat, tol: f64) -> f64 {
    tol * frob(m).max(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgElement {
    pub spec: GroupSpec,
    pub m: CMat,
    pub realness: Realness,
}

impl AlgElement {
    /// Validated constructor; `tol` is relative.
    pub fn new(spec: GroupSpec, m: CMat, realness: Realness, tol: f64) -> Result<Self> {
        let n1 = spec.size();
        if m.shape() != (n1, n1) {
            return Err(Error::SpecMismatch(format!("expected {n1}x{n1}, got {:?}", m.shape())));
        }
        let r = algebra_residual(spec, &m, realness);
        if r > tol_for(&m, tol) {
            return Err(Error::SpecMismatch(format!(
                "matrix is not in the {realness:?} algebra of {} (residual {r:e})",
                spec.label()
            )));
        }
        Ok(AlgElement { spec, m, realness })
    }

    pub fn real(spec: GroupSpec, m: CMat) -> Self {
        AlgElement { spec, m, realness: Realness::RealForm }
    }

    pub fn complexified(spec: GroupSpec, m: CMat) -> Self {
        AlgElement { spec, m, realness: Realness::Complexified }
    }
}

/// Defect of the defining relations of the (real or complexified) algebra.
pub fn algebra_residual(spec: GroupSpec, m: &CMat, realness: Realness) -> f64 {
    let e = spec.metric();
    match (spec.family, realness) {
        (Family::SO0, Realness::RealForm) => {
            let im: f64 = m.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
            im + frob(&(m.transpose() * &e + &e * m))
        }
        (Family::SO0, Realness::Complexified) => frob(&(m.transpose() * &e + &e * m)),
        (Family::SU, Realness::RealForm) => frob(&(m.adjoint() * &e + &e * m)) + m.trace().norm(),
        (Family::SU, Realness::Complexified) => m.trace().norm(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrpElement {
    pub spec: GroupSpec,
    pub m: CMat,
    pub realness: Realness,
}

impl GrpElement {
    pub fn new(spec: GroupSpec, m: CMat, realness: Realness, tol: f64) -> Result<Self> {
        let n1 = spec.size();
        if m.shape() != (n1, n1) {
            return Err(Error::SpecMismatch(format!("expected {n1}x{n1}, got {:?}", m.shape())));
        }
        let r = group_residual(spec, &m, realness);
        if r > tol_for(&m, tol) * frob(&m).max(1.0) {
            return Err(Error::SpecMismatch(format!(
                "matrix is not in the {realness:?} group of {} (residual {r:e})",
                spec.label()
            )));
        }
        Ok(GrpElement { spec, m, realness })
    }

    pub fn identity(spec: GroupSpec) -> Self {
        GrpElement { spec, m: CMat::identity(spec.size(), spec.size()), realness: Realness::RealForm }
    }

    pub fn inverse(&self) -> Self {
        GrpElement {
            spec: self.spec,
            m: self.m.clone().try_inverse().expect("group elements are invertible"),
            realness: self.realness,
        }
    }

    pub fn compose(&self, other: &GrpElement) -> Self {
        let realness = if self.realness == Realness::RealForm && other.realness == Realness::RealForm {
            Realness::RealForm
        } else {
            Realness::Complexified
        };
        GrpElement { spec: self.spec, m: &self.m * &other.m, realness }
    }
}

pub fn group_residual(spec: GroupSpec, m: &CMat, realness: Realness) -> f64 {
    let e = spec.metric();
    let det = (m.determinant() - cr(1.0)).norm();
    match (spec.family, realness) {
        (Family::SO0, Realness::RealForm) => {
            let im: f64 = m.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
            det + im + frob(&(m.transpose() * &e * m - &e))
        }
        (Family::SO0, Realness::Complexified) => det + frob(&(m.transpose() * &e * m - &e)),
        (Family::SU, Realness::RealForm) => det + frob(&(m.adjoint() * &e * m - &e)),
        (Family::SU, Realness::Complexified) => det,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Involution {
    Theta,
    Sigma,
    Tau,
}

/// Involution on matrices of the Lie algebra.
pub fn involution_alg_matrix(spec: GroupSpec, kind: Involution, x: &CMat) -> CMat {
    let e = spec.metric();
    let theta = |m: &CMat| &e * m * &e;
    let sigma = |m: &CMat| match spec.family {
        Family::SO0 => conj_mat(m),
        Family::SU => -(&e * m.adjoint() * &e),
    };
    match kind {
        Involution::Theta => theta(x),
        Involution::Sigma => sigma(x),
        Involution::Tau => sigma(&theta(x)),
    }
}

/// Involution on matrices of the group.
pub fn involution_grp_matrix(spec: GroupSpec, kind: Involution, g: &CMat) -> CMat {
    let e = spec.metric();
    let theta = |m: &CMat| &e * m * &e;
    let sigma = |m: &CMat| match spec.family {
        Family::SO0 => conj_mat(m),
        Family::SU => {
            // Singular input only arises from overflowed iterates; NaN lets callers reject it.
            let inv = m
                .adjoint()
                .try_inverse()
                .unwrap_or_else(|| CMat::from_element(m.nrows(), m.ncols(), c(f64::NAN, f64::NAN)));
            &e * inv * &e
        }
    };
    match kind {
        Involution::Theta => theta(g),
        Involution::Sigma => sigma(g),
        Involution::Tau => sigma(&theta(g)),
    }
}

pub fn apply_involution(kind: Involution, x: &AlgElement) -> AlgElement {
    AlgElement { spec: x.spec, m: involution_alg_matrix(x.spec, kind, &x.m), realness: x.realness }
}

pub fn apply_involution_grp(kind: Involution, g: &GrpElement) -> GrpElement {
    GrpElement { spec: g.spec, m: involution_grp_matrix(g.spec, kind, &g.m), realness: g.realness }
}

/// Matrix exponential by scaling and squaring of a degree-18 Taylor polynomial.
pub fn expm(x: &CMat) -> CMat {
    let n = x.nrows();
    let norm1 = (0..n)
        .map(|j| (0..n).map(|i| x[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut s = 0i32;
    if norm1 > 0.5 {
        s = (norm1 / 0.5).log2().ceil() as i32;
    }
    let scaled = x.scale(0.5f64.powi(s));
    let mut term = CMat::identity(n, n);
    let mut sum = CMat::identity(n, n);
    for k in 1..=18 {
        term = &term * &scaled / cr(k as f64);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

pub fn exp_matrix(x: &AlgElement) -> GrpElement {
    GrpElement { spec: x.spec, m: expm(&x.m), realness: x.realness }
}

pub fn bracket(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Trace form `tr(XY)`, used in place of the Killing form.
pub fn trace_form(a: &CMat, b: &CMat) -> C64 {
    (a * b).trace()
}

/// Real basis of the real form.
pub fn real_form_basis(spec: GroupSpec) -> Vec<CMat> {
    let n1 = spec.size();
    let last = spec.n;
    let mut out = Vec::new();
    match spec.family {
        Family::SO0 => {
            for i in 0..last {
                for j in (i + 1)..last {
                    out.push(unit(n1, i, j) - unit(n1, j, i));
                }
            }
            for i in 0..last {
                out.push(unit(n1, i, last) + unit(n1, last, i));
            }
        }
        Family::SU => {
            for i in 0..last {
                for j in (i + 1)..last {
                    out.push(unit(n1, i, j) - unit(n1, j, i));
                    out.push((unit(n1, i, j) + unit(n1, j, i)) * I);
                }
            }
            for i in 0..last {
                out.push(unit(n1, i, last) + unit(n1, last, i));
                out.push((unit(n1, i, last) - unit(n1, last, i)) * I);
            }
            for k in 0..last {
                out.push((unit(n1, k, k) - unit(n1, k + 1, k + 1)) * I);
            }
        }
    }
    out
}

/// The real form with a fixed basis and a coordinate solver.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    pub spec: GroupSpec,
    pub basis: Vec<CMat>,
    pinv: RMat,
}

impl LieAlgebra {
    pub fn new(spec: GroupSpec) -> Self {
        let basis = real_form_basis(spec);
        let cols: Vec<RVec> = basis.iter().map(flatten_mat).collect();
        let a = RMat::from_columns(&cols);
        let pinv = a.pseudo_inverse(1e-13).expect("basis matrix pseudo-inverse");
        LieAlgebra { spec, basis, pinv }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Real coordinates of a real-form element (least squares).
    pub fn coords(&self, x: &CMat) -> RVec {
        &self.pinv * flatten_mat(x)
    }

    pub fn from_coords(&self, v: &RVec) -> CMat {
        let n1 = self.spec.size();
        let mut m = CMat::zeros(n1, n1);
        for (k, b) in self.basis.iter().enumerate() {
            m += b * cr(v[k]);
        }
        m
    }

    /// Uniformly random direction with Frobenius norm uniform in `(0, max_norm]`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, max_norm: f64) -> CMat {
        let v = RVec::from_fn(self.dim(), |_, _| rng.gen_range(-1.0..1.0));
        let m = self.from_coords(&v);
        let nn = frob(&m);
        if nn == 0.0 {
            return m;
        }
        let target = max_norm * rng.gen_range(0.0f64..1.0).max(1e-3);
        m * cr(target / nn)
    }

    /// Matrix of `ad(x)` in the fixed real basis (only valid for real-form `x`).
    pub fn ad_matrix(&self, x: &CMat) -> RMat {
        let cols: Vec<RVec> = self.basis.iter().map(|b| self.coords(&bracket(x, b))).collect();
        RMat::from_columns(&cols)
    }
}

/// Cartan decomposition `x = k + p`.
pub fn cartan_split(spec: GroupSpec, x: &CMat) -> (CMat, CMat) {
    let tx = involution_alg_matrix(spec, Involution::Theta, x);
    ((x + &tx).scale(0.5), (x - &tx).scale(0.5))
}

#[derive(Debug, Clone)]
pub struct RootDecomp {
    pub base: AlgElement,
    /// Value of the root `lambda` on the base element.
    pub root_value: f64,
    /// Eigenvalue label `k` (meaning `k * lambda`) -> basis of the eigenspace.
    pub spaces: BTreeMap<i8, Vec<CMat>>,
    pub centralizer_k: Vec<CMat>,
    pub split_line: CMat,
}

impl RootDecomp {
    pub fn space(&self, label: i8) -> &[CMat] {
        self.spaces.get(&label).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// `(dim g^lambda, dim g^{2 lambda})`.
    pub fn dims(&self) -> (usize, usize) {
        (self.space(1).len(), self.space(2).len())
    }
}

/// Eigenspace decomposition of `ad(base)` on the real form.
///
/// In the SU family the largest eigenvalue is `2 lambda`, otherwise `lambda`.
pub fn restricted_root_decomposition(spec: GroupSpec, base: &AlgElement) -> Result<RootDecomp> {
    let alg = LieAlgebra::new(spec);
    let ad = alg.ad_matrix(&base.m);
    let ev = ad.complex_eigenvalues();
    let radius = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if radius < 1e-12 {
        return Err(Error::NonSplitBase("ad(base) is nilpotent".into()));
    }
    let cluster_tol = 1e-8;
    let mut reals: Vec<f64> = Vec::with_capacity(ev.len());
    for z in ev.iter() {
        if z.im.abs() / radius > cluster_tol {
            return Err(Error::NonSplitBase(format!("eigenvalue {z} is not real")));
        }
        reals.push(z.re / radius);
    }
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for x in reals {
        match clusters.last_mut() {
            Some(cl) if (x - cl[cl.len() - 1]).abs() <= cluster_tol => cl.push(x),
            _ => clusters.push(vec![x]),
        }
    }
    let top = clusters.iter().map(|cl| cl.iter().sum::<f64>() / cl.len() as f64).fold(f64::MIN, f64::max);
    let lambda_unit = match spec.family {
        Family::SU => top / 2.0,
        Family::SO0 => top,
    };
    let ad_n = &ad / radius;
    let mut spaces = BTreeMap::new();
    for cl in &clusters {
        let mu = cl.iter().sum::<f64>() / cl.len() as f64;
        let k = mu / lambda_unit;
        let kr = k.round();
        if (k - kr).abs() > 1e-6 || kr.abs() > 2.0 {
            return Err(Error::NonSplitBase(format!("eigenvalue ratio {k} is not in {{-2,...,2}}")));
        }
        let shifted = &ad_n - RMat::identity(alg.dim(), alg.dim()) * mu;
        let ns = null_space_real(&shifted, 1e-6);
        if ns.ncols() != cl.len() {
            return Err(Error::NonSplitBase(format!(
                "ad(base) is not diagonalizable: multiplicity {} but eigenspace dimension {}",
                cl.len(),
                ns.ncols()
            )));
        }
        let elems: Vec<CMat> = (0..ns.ncols()).map(|j| alg.from_coords(&ns.column(j).into_owned())).collect();
        spaces.insert(kr as i8, elems);
    }
    let zero = spaces.get(&0).cloned().unwrap_or_default();
    let ks: Vec<RVec> = zero.iter().map(|x| alg.coords(&cartan_split(spec, x).0)).collect();
    let centralizer_k = orthonormalize_real(&ks, 1e-8).iter().map(|v| alg.from_coords(v)).collect();
    Ok(RootDecomp {
        base: base.clone(),
        root_value: lambda_unit * radius,
        spaces,
        centralizer_k,
        split_line: base.m.clone(),
    })
}

#[derive(Debug, Clone)]
pub struct StandardGenerators {
    /// Generator of the split line, `E_{n,n+1} + E_{n+1,n}` (1-based).
    pub a0: CMat,
    pub a2: CMat,
    pub c: Option<CMat>,
    pub c_prime: Option<CMat>,
}

pub fn standard_generators(spec: GroupSpec) -> StandardGenerators {
    let n1 = spec.size();
    let last = spec.n;
    let a0 = unit(n1, last - 1, last) + unit(n1, last, last - 1);
    match spec.family {
        Family::SO0 => {
            let c = (unit(n1, last - 1, last - 2) - unit(n1, last - 2, last - 1)) * cr(2.0);
            StandardGenerators { a2: &a0 * cr(PI / 2.0), a0, c: Some(c), c_prime: None }
        }
        Family::SU => {
            let mut cp = CMat::zeros(n1, n1);
            cp[(last - 1, last - 1)] = I;
            cp[(last, last)] = -I;
            let c = if spec.n >= 2 { Some(unit(n1, last - 1, last - 2) - unit(n1, last - 2, last - 1)) } else { None };
            StandardGenerators { a2: &a0 * cr(PI / 4.0), a0, c, c_prime: Some(cp) }
        }
    }
}

/// Lattice period and fundamental-domain length for `t = alpha(A)`.
fn period_and_length(spec: GroupSpec) -> (f64, f64) {
    match spec.family {
        Family::SO0 => (2.0 * PI, PI),
        Family::SU => (PI, PI / 2.0),
    }
}

/// Maps `t = alpha(A)` into the closed fundamental domain `[0, L]`.
///
/// `alpha` is the root labelled `1` by [`restricted_root_decomposition`],
/// so in the SU family (including `n = 1`) the domain is `[0, pi/2]`.
pub fn reduce_to_fundamental_domain(spec: GroupSpec, t: f64) -> f64 {
    let (period, len) = period_and_length(spec);
    let mut r = t.rem_euclid(period);
    if r > len {
        r = period - r;
    }
    if r >= period {
        r = 0.0;
    }
    r.clamp(0.0, len)
}

/// `Ad_g x = g x g^{-1}`.
pub fn adjoint_action(g: &CMat, x: &CMat) -> CMat {
    g * x * g.clone().try_inverse().expect("invertible")
}

#[allow(dead_code)]
pub(crate) fn zero_mat(n: usize) -> CMat {
    DMatrix::zeros(n, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bases_have_expected_dimension_and_membership() {
        for spec in [GroupSpec::so0(2).unwrap(), GroupSpec::so0(5).unwrap(), GroupSpec::su(1).unwrap(), GroupSpec::su(4).unwrap()] {
            let b = real_form_basis(spec);
            assert_eq!(b.len(), spec.dim_g());
            for x in &b {
                assert!(algebra_residual(spec, x, Realness::RealForm) < 1e-14);
            }
            let alg = LieAlgebra::new(spec);
            for (k, x) in b.iter().enumerate() {
                let v = alg.coords(x);
                for j in 0..v.len() {
                    let want = if j == k { 1.0 } else { 0.0 };
                    assert!((v[j] - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn theta_negates_split_generator() {
        let spec = GroupSpec::so0(3).unwrap();
        let g = standard_generators(spec);
        let a = AlgElement::real(spec, g.a2.clone());
        let t = apply_involution(Involution::Theta, &a);
        assert!(frob(&(t.m + &g.a2)) < 1e-15);
    }

    #[test]
    fn sigma_fixes_identity() {
        for spec in [GroupSpec::so0(2).unwrap(), GroupSpec::su(2).unwrap()] {
            let id = GrpElement::identity(spec);
            let s = apply_involution_grp(Involution::Sigma, &id);
            assert!(frob(&(s.m - id.m)) < 1e-15);
        }
    }

    #[test]
    fn exp_of_zero_and_a2_on_base_point() {
        let spec = GroupSpec::so0(2).unwrap();
        let z = CMat::zeros(3, 3);
        assert!(frob(&(expm(&z) - CMat::identity(3, 3))) < 1e-15);
        let a2 = standard_generators(spec).a2;
        let g = expm(&(a2 * I));
        let v = &g * CVec::from_vec(vec![cr(0.0), cr(0.0), cr(1.0)]);
        assert!((v[0]).norm() < 1e-14);
        assert!((v[1] - I).norm() < 1e-14);
        assert!(v[2].norm() < 1e-14);
    }

    #[test]
    fn exp_inverse_law_on_random_su21() {
        let spec = GroupSpec::su(2).unwrap();
        let alg = LieAlgebra::new(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = alg.random_element(&mut rng, 3.0);
            let r = expm(&x) * expm(&(-&x)) - CMat::identity(3, 3);
            assert!(frob(&r) < 1e-12);
            assert!(group_residual(spec, &expm(&x), Realness::RealForm) < 1e-11);
        }
    }

    #[test]
    fn su_c_bracket_lies_on_split_line() {
        let spec = GroupSpec::su(2).unwrap();
        let g = standard_generators(spec);
        let c = g.c.unwrap();
        let tc = involution_alg_matrix(spec, Involution::Theta, &c);
        let br = bracket(&tc, &c);
        // the bracket is a multiple of a0 (possibly zero)
        let a0 = &g.a0;
        let coef = trace_form(&br, a0) / trace_form(a0, a0);
        assert!(frob(&(br - a0 * coef)) < 1e-14);
    }

    #[test]
    fn fundamental_domain_examples() {
        let so = GroupSpec::so0(2).unwrap();
        let su = GroupSpec::su(2).unwrap();
        assert!((reduce_to_fundamental_domain(so, -PI / 3.0) - PI / 3.0).abs() < 1e-14);
        assert!(reduce_to_fundamental_domain(so, 2.0 * PI).abs() < 1e-14);
        assert!((reduce_to_fundamental_domain(su, 3.0 * PI / 4.0) - PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn c_prime_matches_display() {
        let g = standard_generators(GroupSpec::su(2).unwrap());
        let cp = g.c_prime.unwrap();
        let want = CMat::from_diagonal(&CVec::from_vec(vec![cr(0.0), I, -I]));
        assert!(frob(&(cp - want)) < 1e-15);
    }
}

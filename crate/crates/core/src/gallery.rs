//! Generators for the worked example systems, the `Q(S, E)` construction with
//! Hurwitz–Radon families, and seeded random systems.

use crate::error::{Error, Result};
use crate::exactmath::{q, QMatrix, QVector, Rational};
use crate::quadforms::{find_unimodular_combination, HypWitness, QFSystem, QuadForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// A named generator invocation, as used by the `gen` subcommand.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExampleSpec {
    pub name: String,
    pub params: BTreeMap<String, i64>,
}

pub const EXAMPLE_NAMES: [&str; 5] = ["block_pair", "triangular_pair", "galois_pair", "q_se", "random_system"];

impl ExampleSpec {
    pub fn new(name: &str) -> Self {
        ExampleSpec { name: name.to_string(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: i64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    fn param(&self, key: &str, default: i64) -> i64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    fn count(&self, key: &str, default: i64) -> Result<usize> {
        usize::try_from(self.param(key, default))
            .map_err(|_| Error::InvalidArgument(format!("parameter {key} must be nonnegative")))
    }

    /// Run the generator. Parameters: `block_pair: n`, `q_se: n` (with the
    /// default `S` of [`default_s_basis`]), `random_system: dim, count,
    /// height, seed`.
    pub fn generate(&self) -> Result<QFSystem> {
        match self.name.as_str() {
            "block_pair" => gen_block_pair(self.count("n", 1)?),
            "triangular_pair" => Ok(gen_triangular_pair()),
            "galois_pair" => Ok(gen_galois_pair()),
            "q_se" => {
                let n = self.count("n", 2)?;
                gen_q_se(n, &default_s_basis(n), &hurwitz_radon_family(n)?)
            }
            "random_system" => gen_random_system(
                self.count("dim", 3)?,
                self.count("count", 2)?,
                self.param("height", 2).unsigned_abs(),
                self.param("seed", 0) as u64,
            ),
            other => Err(Error::InvalidArgument(format!(
                "unknown example {other:?}; expected one of {}",
                EXAMPLE_NAMES.join(", ")
            ))),
        }
    }
}

fn sym(n: usize, entries: &[(usize, usize, i64)]) -> QuadForm {
    let mut g = QMatrix::zeros(n, n);
    for &(i, j, x) in entries {
        g[(i, j)] = q(x);
        g[(j, i)] = q(x);
    }
    QuadForm::new(g).expect("symmetric by construction")
}

/// Basis of the forms `[[αI, a], [aᵗ, −αI]]` on `ℚ^{2n}`: first `α = 1, a = 0`,
/// then `α = 0, a = E_ij` in row-major order.
pub fn gen_block_pair(n: usize) -> Result<QFSystem> {
    if n == 0 {
        return Err(Error::InvalidArgument("block size must be at least 1".into()));
    }
    let mut diag = vec![1; n];
    diag.extend(vec![-1; n]);
    let mut forms = vec![QuadForm::diagonal_i64(&diag)];
    for i in 0..n {
        for j in 0..n {
            forms.push(sym(2 * n, &[(i, n + j, 1)]));
        }
    }
    QFSystem::new(forms)
}

/// The subspaces `V₁ = {(u, v, −v, u)}` and `V₂ = {(u, v, v, −u)}` of
/// `ℚ^{4n} = (ℚⁿ)⁴`, offered as a hyperbolic witness for `2×` the block
/// pair. Both are totally isotropic only when `n = 1`: for `n ≥ 2` the form
/// `a = E_12` takes the value `2(uᵗav − vᵗau) ≠ 0` on `V₁`.
pub fn block_pair_witness(n: usize) -> HypWitness {
    let dim = 4 * n;
    let vec4 = |k: usize, blocks: [i64; 4]| -> QVector {
        let mut v = vec![q(0); dim];
        for (b, c) in blocks.iter().enumerate() {
            v[b * n + k] = q(*c);
        }
        v
    };
    let u_basis = (0..n).map(|k| vec4(k, [1, 0, 0, 1])).chain((0..n).map(|k| vec4(k, [0, 1, -1, 0])));
    let w_basis = (0..n).map(|k| vec4(k, [1, 0, 0, -1])).chain((0..n).map(|k| vec4(k, [0, 1, 1, 0])));
    HypWitness { u_basis: u_basis.collect(), w_basis: w_basis.collect() }
}

/// `[[−α,,,],[,,,α],[,,α,β],[,α,β,]]` at `(α, β) = (1, 0), (0, 1)`.
pub fn gen_triangular_pair() -> QFSystem {
    let alpha = sym(4, &[(0, 0, -1), (1, 3, 1), (2, 2, 1)]);
    let beta = sym(4, &[(2, 3, 1)]);
    QFSystem::new(vec![alpha, beta]).expect("same dimension")
}

/// `[[,,α,β],[,,2β,α],[α,2β,β,],[β,α,,]]` at `(α, β) = (1, 0), (0, 1)`.
pub fn gen_galois_pair() -> QFSystem {
    let alpha = sym(4, &[(0, 2, 1), (1, 3, 1)]);
    let beta = sym(4, &[(0, 3, 1), (1, 2, 2), (2, 2, 1)]);
    QFSystem::new(vec![alpha, beta]).expect("same dimension")
}

/// `ρ(n) = 8a + 2^b` for `n = 2^{4a+b} c`, `0 ≤ b ≤ 3`, `c` odd.
pub fn hurwitz_radon_rho(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("ρ(0) is undefined".into()));
    }
    let v = u64::from(n.trailing_zeros());
    Ok(8 * (v / 4) + (1 << (v % 4)))
}

/// Cayley–Dickson product of basis units in dimension `2^level`, as
/// `(sign, index)`, with `(a, b)(c, d) = (ac − d̄b, da + bc̄)`.
fn cd_mul(level: u32, i: usize, j: usize) -> (i64, usize) {
    if level == 0 {
        return (1, 0);
    }
    let h = 1usize << (level - 1);
    let conj = |k: usize| if k == 0 { 1 } else { -1 };
    match (i < h, j < h) {
        // (a, 0)(c, 0) = (ac, 0)
        (true, true) => cd_mul(level - 1, i, j),
        // (a, 0)(0, d) = (0, da)
        (true, false) => {
            let (s, k) = cd_mul(level - 1, j - h, i);
            (s, k + h)
        }
        // (0, b)(c, 0) = (0, bc̄)
        (false, true) => {
            let (s, k) = cd_mul(level - 1, i - h, j);
            (s * conj(j), k + h)
        }
        // (0, b)(0, d) = (−d̄b, 0)
        (false, false) => {
            let (s, k) = cd_mul(level - 1, j - h, i - h);
            (-s * conj(j - h), k)
        }
    }
}

/// Left multiplication matrices of the Cayley–Dickson algebra of dimension
/// `2^level` (ℚ, ℚ(i), quaternions, octonions).
fn cd_left_multiplications(level: u32) -> Vec<QMatrix> {
    let n = 1usize << level;
    (0..n)
        .map(|k| {
            let mut m = QMatrix::zeros(n, n);
            for j in 0..n {
                let (s, r) = cd_mul(level, k, j);
                m[(r, j)] = q(s);
            }
            m
        })
        .collect()
}

/// `ρ(n)` matrices `e₁ = I, …` with `e_iᵗ e_j + e_jᵗ e_i = 2δ_ij I`, for
/// `n ∈ {1, 2, 4, 8, 16}`.
pub fn hurwitz_radon_family(n: usize) -> Result<Vec<QMatrix>> {
    match n {
        1 | 2 | 4 | 8 => Ok(cd_left_multiplications(n.trailing_zeros())),
        16 => {
            let l = cd_left_multiplications(3);
            let mut out = vec![QMatrix::identity(16)];
            for lk in &l[1..] {
                out.push(QMatrix::block_diag(&[lk.clone(), lk.scale(&q(-1))]));
            }
            let mut j = QMatrix::zeros(16, 16);
            j.set_block(0, 8, &QMatrix::identity(8).scale(&q(-1)));
            j.set_block(8, 0, &QMatrix::identity(8));
            out.push(j);
            Ok(out)
        }
        _ => Err(Error::Unsupported(format!("Hurwitz–Radon families are built for n in {{1, 2, 4, 8, 16}}, not {n}"))),
    }
}

/// `S` used by the `gen` subcommand: `diag(1, −1, 0, …)` when `n ≥ 2`.
pub fn default_s_basis(n: usize) -> Vec<QMatrix> {
    if n < 2 {
        return Vec::new();
    }
    let mut d = vec![0; n];
    d[0] = 1;
    d[1] = -1;
    vec![QMatrix::diag_i64(&d)]
}

/// Basis of `Q(S, E) = {[[0, e], [eᵗ, s]]}` on `ℚ^{2n}`: the `E` forms
/// (`s = 0`) first, then the `S` forms (`e = 0`).
pub fn gen_q_se(n: usize, s_basis: &[QMatrix], e_basis: &[QMatrix]) -> Result<QFSystem> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut forms = Vec::new();
    for e in e_basis {
        if e.rows() != n || e.cols() != n {
            return Err(Error::DimensionMismatch(format!("E element is not {n}×{n}")));
        }
        let mut g = QMatrix::zeros(2 * n, 2 * n);
        g.set_block(0, n, e);
        g.set_block(n, 0, &e.transpose());
        forms.push(QuadForm::new(g)?);
    }
    for s in s_basis {
        let form = QuadForm::new(s.clone())?;
        if form.dim() != n {
            return Err(Error::DimensionMismatch(format!("S element is not {n}×{n}")));
        }
        if form.signature() != 0 {
            return Err(Error::InvalidArgument("S element has nonzero signature".into()));
        }
        forms.push(QuadForm::zero(n).orthogonal_sum(&form));
    }
    if forms.is_empty() {
        return Err(Error::InvalidArgument("S and E are both empty".into()));
    }
    QFSystem::new(forms)
}

/// Symmetric integer matrices with entries in `[−height, height]`,
/// reproducible from `seed`.
pub fn gen_random_system(dim: usize, count: usize, height: u64, seed: u64) -> Result<QFSystem> {
    if dim == 0 || count == 0 {
        return Err(Error::InvalidArgument("dimension and count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    QFSystem::new((0..count).map(|_| random_form(&mut rng, dim, height)).collect())
}

pub(crate) fn random_form(rng: &mut impl Rng, dim: usize, height: u64) -> QuadForm {
    let h = height as i64;
    let mut g = QMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let x = q(rng.gen_range(-h..=h));
            g[(i, j)] = x.clone();
            g[(j, i)] = x;
        }
    }
    QuadForm::new(g).expect("symmetric by construction")
}

/// A seeded random pair whose span contains a unimodular form.
pub fn gen_random_nonsingular_pair(dim: usize, height: u64, seed: u64) -> Result<QFSystem> {
    if dim == 0 || height == 0 {
        return Err(Error::InvalidArgument("dimension and height must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let sys = QFSystem::new(vec![random_form(&mut rng, dim, height), random_form(&mut rng, dim, height)])?;
        if find_unimodular_combination(&sys).is_some() {
            return Ok(sys);
        }
    }
}

/// The example pairs: block pair `n = 1`, triangular, Galois, and `Q(0, E)`
/// for `n = 2`.
pub fn gallery_pairs() -> Vec<(&'static str, QFSystem)> {
    vec![
        ("block_pair_1", gen_block_pair(1).expect("n = 1")),
        ("triangular_pair", gen_triangular_pair()),
        ("galois_pair", gen_galois_pair()),
        ("q_se_2", gen_q_se(2, &[], &hurwitz_radon_family(2).expect("n = 2")).expect("valid")),
    ]
}

/// Every example system small enough for the structure checks.
pub fn gallery_systems() -> Vec<(String, QFSystem)> {
    let mut out: Vec<(String, QFSystem)> = gallery_pairs().into_iter().map(|(k, s)| (k.to_string(), s)).collect();
    for n in 2..=3 {
        out.push((format!("block_pair_{n}"), gen_block_pair(n).expect("n ≥ 1")));
    }
    let q_se = gen_q_se(2, &default_s_basis(2), &hurwitz_radon_family(2).expect("n = 2"));
    out.push(("q_se_2_s".to_string(), q_se.expect("valid")));
    out
}

/// Integer combinations of the system with coefficients in `[−height, height]`.
pub fn span_grid(sys: &QFSystem, height: i64) -> impl Iterator<Item = QuadForm> + '_ {
    let t = sys.len();
    let side = (2 * height + 1) as usize;
    (0..side.pow(t as u32)).map(move |mut code| {
        let coeffs: Vec<Rational> = (0..t)
            .map(|_| {
                let c = (code % side) as i64 - height;
                code /= side;
                q(c)
            })
            .collect();
        sys.combination(&coeffs).expect("matching length")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadforms::{n_times, verify_hyp_witness};
    use num::Signed;

    fn hurwitz_relations_hold(family: &[QMatrix]) -> bool {
        let n = family[0].rows();
        family.iter().enumerate().all(|(i, a)| {
            family.iter().enumerate().all(|(j, b)| {
                let lhs = a.transpose().mul(b).add(&b.transpose().mul(a));
                let rhs = if i == j { QMatrix::identity(n).scale(&q(2)) } else { QMatrix::zeros(n, n) };
                lhs == rhs
            })
        })
    }

    #[test]
    fn block_pair_shapes() {
        let s = gen_block_pair(1).unwrap();
        assert_eq!(s.forms()[0], QuadForm::diagonal_i64(&[1, -1]));
        assert_eq!(s.forms()[1], QuadForm::from_i64(&[&[0, 1], &[1, 0]]));
        let s = gen_block_pair(2).unwrap();
        assert_eq!((s.len(), s.dim()), (5, 4));
        assert!(gen_block_pair(0).is_err());
        assert!(span_grid(&s, 1).all(|f| f.signature() == 0));
    }

    #[test]
    fn block_pair_witness_only_for_one() {
        let w = block_pair_witness(1);
        assert!(verify_hyp_witness(&n_times(&gen_block_pair(1).unwrap(), 2).unwrap(), &w).unwrap());
        let w = block_pair_witness(2);
        assert!(!verify_hyp_witness(&n_times(&gen_block_pair(2).unwrap(), 2).unwrap(), &w).unwrap());
    }

    #[test]
    fn rho_values() {
        let got: Vec<u64> = [1, 2, 3, 4, 8, 16, 32, 48].iter().map(|&n| hurwitz_radon_rho(n).unwrap()).collect();
        assert_eq!(got, vec![1, 2, 1, 4, 8, 9, 10, 9]);
        assert!(hurwitz_radon_rho(0).is_err());
    }

    #[test]
    fn families_satisfy_relations() {
        assert_eq!(hurwitz_radon_family(1).unwrap(), vec![QMatrix::identity(1)]);
        assert_eq!(
            hurwitz_radon_family(2).unwrap(),
            vec![QMatrix::identity(2), QMatrix::from_i64(&[&[0, -1], &[1, 0]])]
        );
        for n in [1usize, 2, 4, 8, 16] {
            let fam = hurwitz_radon_family(n).unwrap();
            assert_eq!(fam.len() as u64, hurwitz_radon_rho(n as u64).unwrap());
            assert!(hurwitz_relations_hold(&fam), "n = {n}");
        }
        assert!(hurwitz_radon_family(3).is_err());
    }

    #[test]
    fn q_se_construction() {
        let sys = gen_q_se(2, &[QMatrix::diag_i64(&[1, -1])], &hurwitz_radon_family(2).unwrap()).unwrap();
        assert_eq!((sys.len(), sys.dim()), (3, 4));
        assert!(span_grid(&sys, 2).all(|f| f.signature() == 0));
        assert!(gen_q_se(2, &[QMatrix::identity(2)], &[]).is_err());
    }

    #[test]
    fn random_systems_are_reproducible() {
        let a = gen_random_system(3, 2, 2, 7).unwrap();
        assert_eq!(a, gen_random_system(3, 2, 2, 7).unwrap());
        assert_eq!((a.len(), a.dim()), (2, 3));
        let bounded = a.forms().iter().all(|f| f.gram().entries().iter().all(|x| x.abs() <= q(2)));
        assert!(bounded);
        let p = gen_random_nonsingular_pair(3, 2, 11).unwrap();
        assert!(find_unimodular_combination(&p).is_some());
    }

    #[test]
    fn spec_generation() {
        let s = ExampleSpec::new("block_pair").with("n", 2).generate().unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(ExampleSpec::new("galois_pair").generate().unwrap(), gen_galois_pair());
        assert!(ExampleSpec::new("nope").generate().is_err());
        assert_eq!(ExampleSpec::new("q_se").with("n", 4).generate().unwrap().len(), 5);
    }
}

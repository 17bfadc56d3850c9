//! Acceptance run: one PASS/FAIL line per criterion, each with a wall-clock
//! limit. Exits nonzero if any criterion fails.

use num::{Signed, Zero};
use qfsys::closure::{closure_basis, closure_contains};
use qfsys::exactmath::{q, QMatrix, QVector, Rational};
use qfsys::gallery::{
    block_pair_witness, gallery_pairs, gallery_systems, gen_block_pair, gen_galois_pair, gen_random_nonsingular_pair,
    gen_triangular_pair, hurwitz_radon_family, hurwitz_radon_rho,
};
use qfsys::involutions::{
    adjoint_algebra, dickson_radical, find_hyperbolic_idempotent, theorem1_decide, trace_form, weak_order, HypVerdict,
};
use qfsys::pairs::{theorem2_decide, F_functor, G_functor};
use qfsys::quadforms::{n_times, verify_hyp_witness, MatrixFile, QFSystem, QuadForm};
use qfsys::verify::verify_payload;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn ok<T, E: std::fmt::Display>(r: std::result::Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
    loop {
        let data: Vec<Rational> = (0..n * n).map(|_| q(rng.gen_range(-3..=3))).collect();
        let p = QMatrix::new(n, n, data).unwrap();
        if p.rank() == n {
            return p;
        }
    }
}

/// Triangular pair: algebra shape, trace signature, closure shape.
fn criterion_1() -> Check {
    let sys = gen_triangular_pair();
    let a = adjoint_algebra(&sys);
    ensure(a.dim() == 6, || format!("dim A = {}, expected 6", a.dim()))?;
    for s in 0..a.dim() {
        let (phi, psi) = ok(a.to_pair(&a.basis_vector(s)))?;
        let free = [(0, 0), (0, 3), (1, 0), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];
        let zeros_ok = (0..4).all(|i| (0..4).all(|j| free.contains(&(i, j)) || phi[(i, j)].is_zero()));
        let phi_ok = phi[(1, 1)] == phi[(2, 2)] && phi[(2, 2)] == phi[(3, 3)] && phi[(1, 2)] == phi[(2, 3)];
        let mut expected_psi = phi.clone();
        expected_psi[(0, 3)] = -&phi[(1, 0)];
        expected_psi[(1, 0)] = -&phi[(0, 3)];
        ensure(zeros_ok && phi_ok && psi == expected_psi, || format!("basis pair {s} off the display shape"))?;
    }
    let sgn = trace_form(&a).signature();
    ensure(sgn == 2, || format!("trace signature {sgn}, expected 2"))?;
    let cl = closure_basis(&sys);
    ensure(cl.dim() == 3, || format!("dim Cl = {}, expected 3", cl.dim()))?;
    for f in &cl.basis {
        let g = f.gram();
        let alpha = g[(1, 3)].clone();
        let beta = g[(2, 3)].clone();
        let gamma = g[(3, 3)].clone();
        let mut expected = QMatrix::zeros(4, 4);
        expected[(0, 0)] = -alpha.clone();
        expected[(1, 3)] = alpha.clone();
        expected[(3, 1)] = alpha.clone();
        expected[(2, 2)] = alpha;
        expected[(2, 3)] = beta.clone();
        expected[(3, 2)] = beta;
        expected[(3, 3)] = gamma;
        ensure(*g == expected, || "closure basis form off the (α, β, γ) display".into())?;
    }
    ensure(!theorem1_decide(&sys).exists_n, || "trace test claims some n× is hyperbolic".into())
}

/// Galois pair: ⟨0,0,2,1⟩ in the closure, pair decision with verified witness.
fn criterion_2() -> Check {
    let sys = gen_galois_pair();
    let d = QuadForm::diagonal_i64(&[0, 0, 2, 1]);
    ensure(ok(closure_contains(&sys, &d))?, || "⟨0,0,2,1⟩ not in the closure".into())?;
    ensure(d.signature() == 2, || format!("sgn ⟨0,0,2,1⟩ = {}", d.signature()))?;
    let dec = ok(theorem2_decide(&sys))?;
    ensure(!dec.exists_n, || "exists_n should be false".into())?;
    let w = dec.witness.ok_or("no closure witness")?;
    let payload = ok(MatrixFile::new(4, vec![w.form.gram().clone()], vec!["closure_form".into()]))?;
    ensure(ok(verify_payload(&sys, &payload))? == Some(true), || "independent check rejected the witness".into())?;
    ensure(dec.agrees_with_theorem1, || "pair decision disagrees with the trace test".into())
}

/// Block pair for n = 1, 2, 3: the explicit doubled witness and weak order 2.
fn criterion_3() -> Check {
    let mut failures = Vec::new();
    for n in 1..=3 {
        let sys = ok(gen_block_pair(n))?;
        let doubled = ok(n_times(&sys, 2))?;
        if !ok(verify_hyp_witness(&doubled, &block_pair_witness(n)))? {
            failures.push(format!("n={n}: (V1, V2) is not a hyperbolic witness for 2×"));
        }
        if n == 1 {
            let v = ok(find_hyperbolic_idempotent(&adjoint_algebra(&sys)))?;
            if v != HypVerdict::NoneCertified {
                failures.push(format!("n=1: level-1 verdict {}", v.label()));
            }
        }
        let wo = ok(weak_order(&sys, 2))?;
        if wo.order != Some(2) {
            let sgn = trace_form(&adjoint_algebra(&sys)).signature();
            failures.push(format!("n={n}: weak order {:?} (trace signature {sgn})", wo.order));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))
}

fn random_form_with_degeneracy(rng: &mut ChaCha8Rng, dim: usize) -> QuadForm {
    let rank = rng.gen_range(0..=dim);
    let rank = if rng.gen_bool(0.5) { dim } else { rank };
    let b = QMatrix::new(rank, dim, (0..rank * dim).map(|_| q(rng.gen_range(-2..=2))).collect()).unwrap();
    let signs: Vec<i64> = (0..rank).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    QuadForm::new(b.transpose().mul(&QMatrix::diag_i64(&signs)).mul(&b)).unwrap()
}

/// Single forms: trace signature is the square of the signature and the closure is the line.
fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for k in 0..30 {
        let dim = 1 + k % 5;
        let f = random_form_with_degeneracy(&mut rng, dim);
        let sys = QFSystem::new(vec![f.clone()]).unwrap();
        let t = trace_form(&adjoint_algebra(&sys)).signature();
        let s = f.signature();
        ensure(t == s * s, || format!("form {k}: trace sgn {t} vs sgn² {}", s * s))?;
        let cl = closure_basis(&sys);
        if f.is_zero() {
            ensure(cl.dim() == 0, || format!("form {k}: zero form with closure dim {}", cl.dim()))?;
            continue;
        }
        ensure(cl.dim() == 1, || format!("form {k}: closure dim {}", cl.dim()))?;
        let g = cl.basis[0].gram();
        let idx = f.gram().entries().iter().position(|x| !x.is_zero()).unwrap();
        let ratio = &f.gram().entries()[idx] / &g.entries()[idx];
        ensure(g.scale(&ratio) == *f.gram(), || format!("form {k}: closure not proportional"))?;
    }
    Ok(())
}

/// Trace test and closure witness agree on every example pair and 30 random ones.
fn criterion_5() -> Check {
    let mut pairs: Vec<(String, QFSystem)> = gallery_pairs().into_iter().map(|(k, s)| (k.to_string(), s)).collect();
    for seed in 0..30u64 {
        let dim = 1 + (seed % 4) as usize;
        pairs.push((format!("random seed {seed}"), ok(gen_random_nonsingular_pair(dim, 2, seed))?));
    }
    for (name, sys) in &pairs {
        let d = ok(theorem2_decide(sys))?;
        ensure(d.agrees_with_theorem1, || {
            format!("{name}: exists_n = {}, witness = {}", d.exists_n, d.witness.is_some())
        })?;
    }
    Ok(())
}

/// Amplification dimension, F/G round trip, involution laws, radical properties.
fn criterion_6() -> Check {
    let systems = gallery_systems();
    for (name, sys) in &systems {
        let a = adjoint_algebra(sys);
        for m in 1..=3usize {
            let amp = ok(a.amplify(m))?;
            let direct = adjoint_algebra(&ok(n_times(sys, m))?);
            ensure(amp.dim() == m * m * a.dim() && direct.dim() == amp.dim(), || {
                format!("{name}: dim A({m}×) = {} / {}, expected {}", direct.dim(), amp.dim(), m * m * a.dim())
            })?;
        }
        let rad = ok(dickson_radical(&a))?;
        let before = QMatrix::from_columns(a.dim(), &rad).rank();
        let span_contains = |x: &QVector| {
            let mut cols = rad.clone();
            cols.push(x.clone());
            QMatrix::from_columns(a.dim(), &cols).rank() == before
        };
        ensure(rad.iter().all(|x| span_contains(&a.sigma(x))), || format!("{name}: radical not σ-stable"))?;
        let mut power = rad.clone();
        for _ in 0..=a.dim() {
            if power.iter().all(|x| x.iter().all(Zero::is_zero)) {
                break;
            }
            power = power.iter().flat_map(|x| rad.iter().map(|y| a.mul(x, y))).collect();
        }
        ensure(power.iter().all(|x| x.iter().all(Zero::is_zero)), || format!("{name}: radical not nilpotent"))?;
    }
    for (name, sys) in gallery_pairs() {
        let h = ok(F_functor(&sys))?;
        ensure(ok(G_functor(&h))? == sys, || format!("{name}: G(F(sys)) differs"))?;
        let doubled = ok(sys.orthogonal_sum(&sys))?;
        ensure(ok(F_functor(&doubled))? == h.orthogonal_sum(&h), || format!("{name}: F does not respect sums"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..100 {
        let (name, sys) = &systems[k % systems.len()];
        let a = adjoint_algebra(sys);
        let mut rand_elem = || -> QVector { (0..a.dim()).map(|_| q(rng.gen_range(-3..=3))).collect() };
        let (x, y) = (rand_elem(), rand_elem());
        ensure(a.sigma(&a.mul(&x, &y)) == a.mul(&a.sigma(&y), &a.sigma(&x)), || {
            format!("{name}: σ is not an anti-automorphism")
        })?;
        ensure(a.sigma(&a.sigma(&x)) == x, || format!("{name}: σ is not involutive"))?;
    }
    Ok(())
}

/// Hurwitz–Radon numbers and families.
fn criterion_7() -> Check {
    for (n, rho) in [(1u64, 1u64), (2, 2), (4, 4), (8, 8), (16, 9)] {
        let got = ok(hurwitz_radon_rho(n))?;
        ensure(got == rho, || format!("ρ({n}) = {got}, expected {rho}"))?;
        let fam = ok(hurwitz_radon_family(n as usize))?;
        ensure(fam.len() as u64 == rho, || format!("family for {n} has {} members", fam.len()))?;
        let nn = n as usize;
        for (i, a) in fam.iter().enumerate() {
            for (j, b) in fam.iter().enumerate() {
                let lhs = a.transpose().mul(b).add(&b.transpose().mul(a));
                let rhs = if i == j { QMatrix::identity(nn).scale(&q(2)) } else { QMatrix::zeros(nn, nn) };
                ensure(lhs == rhs, || format!("n={n}: relation fails for ({i}, {j})"))?;
            }
        }
    }
    let fam = ok(hurwitz_radon_family(16))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let coeffs: Vec<Rational> = loop {
            let c: Vec<Rational> = (0..fam.len())
                .map(|_| Rational::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=4).into()))
                .collect();
            if c.iter().any(|x| !x.is_zero()) {
                break c;
            }
        };
        let mut m = QMatrix::zeros(16, 16);
        for (c, e) in coeffs.iter().zip(&fam) {
            m.add_scaled(c, e);
        }
        ensure(!ok(m.determinant())?.is_zero(), || "singular nonzero combination".into())?;
    }
    Ok(())
}

/// Integer isotropic vectors of height at most `h` (first nonzero entry positive).
fn isotropic_vectors(diag: &[i64], h: i64) -> Vec<Vec<i64>> {
    let n = diag.len();
    let side = (2 * h + 1) as usize;
    let mut out = Vec::new();
    for mut code in 0..side.pow(n as u32) {
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let x = (code % side) as i64 - h;
                code /= side;
                x
            })
            .collect();
        let first = v.iter().find(|x| **x != 0).copied().unwrap_or(0);
        if first > 0 && v.iter().zip(diag).map(|(x, d)| d * x * x).sum::<i64>() == 0 {
            out.push(v);
        }
    }
    out
}

/// Weak order of ⟨1,−2⟩ against an isotropy search oracle; signature invariance.
fn criterion_8() -> Check {
    let sys = QFSystem::new(vec![QuadForm::diagonal_i64(&[1, -2])]).unwrap();
    let wo = ok(weak_order(&sys, 3))?;
    ensure(wo.order == Some(2), || format!("weak order {:?}", wo.order))?;
    ensure(isotropic_vectors(&[1, -2], 10).is_empty(), || "⟨1,−2⟩ has an isotropic vector".into())?;
    let diag = [1, 1, -2, -2];
    let iso = isotropic_vectors(&diag, 10);
    let bil = |x: &[i64], y: &[i64]| -> i64 { x.iter().zip(y).zip(&diag).map(|((a, b), d)| a * b * d).sum() };
    let plane = iso.iter().enumerate().find_map(|(i, v)| {
        iso[i + 1..].iter().find(|w| bil(v, w) == 0 && (0..4).any(|a| (a + 1..4).any(|b| v[a] * w[b] != v[b] * w[a])))
    });
    ensure(plane.is_some(), || "no totally isotropic plane in ⟨1,1,−2,−2⟩ at height ≤ 10".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let forms = [
        QuadForm::diagonal_i64(&[1, -2]),
        QuadForm::diagonal_i64(&[1, 1, -2, -2]),
        gen_triangular_pair().forms()[0].clone(),
        gen_galois_pair().forms()[1].clone(),
    ];
    for f in &forms {
        for _ in 0..50 {
            let p = random_invertible(&mut rng, f.dim());
            let g = f.transform(&p);
            ensure(g.signature() == f.signature(), || "signature changed under congruence".into())?;
            ensure(g.gram().entries().iter().all(|x| x.abs() < q(1_000_000)), || "entries exploded".into())?;
        }
    }
    Ok(())
}

/// (id, name, time limit in ms, check)
type Criterion = (u32, &'static str, u64, fn() -> Check);

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "triangular pair suite", 1_000, criterion_1),
        (2, "galois pair suite", 2_000, criterion_2),
        (3, "block pair suite (n = 1, 2, 3)", 2_000, criterion_3),
        (4, "single-form property suite", 10_000, criterion_4),
        (5, "trace test / closure witness concordance", 60_000, criterion_5),
        (6, "structure suite", 10_000, criterion_6),
        (7, "Hurwitz–Radon suite", 5_000, criterion_7),
        (8, "oracle suite", 30_000, criterion_8),
    ];
    let mut failed = 0;
    for (id, name, limit_ms, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let outcome = match result {
            Ok(()) if elapsed <= Duration::from_millis(limit_ms) => Ok(()),
            Ok(()) => Err("exceeded time limit".to_string()),
            Err(e) => Err(e),
        };
        let ms = elapsed.as_millis();
        match outcome {
            Ok(()) => println!("PASS [{id}] {name} ({ms} ms, limit {limit_ms} ms)"),
            Err(e) => {
                failed += 1;
                println!("FAIL [{id}] {name} ({ms} ms, limit {limit_ms} ms): {e}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

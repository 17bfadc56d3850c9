use num::BigRational;
use proptest::prelude::*;
use qfsys::closure::closure_contains;
use qfsys::exactmath::{factor, isolate_real_roots, q, sturm_count, QMatrix, UPoly};
use qfsys::gallery::{gallery_pairs, gen_random_nonsingular_pair, gen_random_system};
use qfsys::involutions::theorem1_decide;
use qfsys::pairs::{closure_poly_form, kronecker_decompose, pencil_J, rebase_pair, theorem2_decide};
use qfsys::quadforms::{QFSystem, QuadForm};

fn symmetric(n: usize, entries: &[i64]) -> QMatrix {
    let mut g = QMatrix::zeros(n, n);
    let mut it = entries.iter();
    for i in 0..n {
        for j in i..n {
            let x = q(*it.next().unwrap());
            g[(i, j)] = x.clone();
            g[(j, i)] = x;
        }
    }
    g
}

fn sym_strategy() -> impl Strategy<Value = QMatrix> {
    (1usize..=4)
        .prop_flat_map(|n| prop::collection::vec(-4i64..=4, n * (n + 1) / 2).prop_map(move |e| symmetric(n, &e)))
}

fn poly_strategy() -> impl Strategy<Value = UPoly> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 2..=4), 1..=3).prop_filter_map("nonconstant factors", |fs| {
        let mut f = UPoly::one();
        for c in fs {
            let g = UPoly::from_i64(&c);
            if g.degree().unwrap_or(0) == 0 {
                return None;
            }
            f = f.mul(&g);
        }
        Some(f)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signature_is_a_congruence_invariant(
        g in sym_strategy(),
        p in prop::collection::vec(-3i64..=3, 16),
    ) {
        let n = g.rows();
        let p = QMatrix::new(n, n, p[..n * n].iter().map(|&x| q(x)).collect()).unwrap();
        prop_assume!(p.determinant().unwrap() != q(0));
        let a = g.inertia().unwrap();
        let b = p.transpose().mul(&g).mul(&p).inertia().unwrap();
        prop_assert_eq!((a.positive, a.negative, a.zero), (b.positive, b.negative, b.zero));
    }

    #[test]
    fn diagonalization_is_a_congruence(g in sym_strategy()) {
        let (d, p) = g.congruence_diagonalize().unwrap();
        prop_assert_eq!(p.transpose().mul(&g).mul(&p), d.clone());
        prop_assert!(p.determinant().unwrap() != q(0));
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                prop_assert!(i == j || d[(i, j)] == q(0));
            }
        }
    }

    #[test]
    fn factorization_multiplies_back(f in poly_strategy()) {
        let fac = factor(&f).unwrap();
        prop_assert_eq!(fac.expand(), f);
        for (p, e) in &fac.factors {
            prop_assert!(p.is_monic() && p.degree().unwrap() >= 1 && *e >= 1);
            prop_assert_eq!(p.gcd(&p.derivative()).degree(), Some(0));
        }
        for (i, (a, _)) in fac.factors.iter().enumerate() {
            for (b, _) in &fac.factors[i + 1..] {
                prop_assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn root_isolation_matches_sturm(f in poly_strategy()) {
        let roots = isolate_real_roots(&f).unwrap();
        prop_assert_eq!(roots.len(), sturm_count(&f).unwrap());
        for w in roots.windows(2) {
            prop_assert!(w[0].hi() < w[1].lo() || (w[0].hi() == w[1].lo() && !w[0].is_rational()));
        }
        for r in &roots {
            if r.is_rational() {
                prop_assert_eq!(f.eval(r.lo()), q(0));
            } else {
                let g = f.gcd(&f.derivative());
                let sf = f.divrem(&g).0;
                prop_assert!(sf.eval(r.lo()) * sf.eval(r.hi()) < q(0));
            }
        }
    }

    #[test]
    fn json_round_trip(
        n in 1usize..=3,
        nums in prop::collection::vec((-9i64..=9, 1i64..=5), 12),
        count in 1usize..=2,
    ) {
        let forms: Vec<QuadForm> = (0..count)
            .map(|k| {
                let mut g = QMatrix::zeros(n, n);
                let mut it = nums[k * 6..].iter();
                for i in 0..n {
                    for j in i..n {
                        let (a, b) = it.next().unwrap();
                        let x = BigRational::new((*a).into(), (*b).into());
                        g[(i, j)] = x.clone();
                        g[(j, i)] = x;
                    }
                }
                QuadForm::new(g).unwrap()
            })
            .collect();
        let sys = QFSystem::new(forms).unwrap();
        let text = sys.to_json();
        let back = QFSystem::from_json(&text).unwrap();
        prop_assert_eq!(&back, &sys);
        prop_assert_eq!(back.to_json(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn closure_contains_the_system(dim in 1usize..=3, count in 1usize..=3, seed in any::<u64>()) {
        let sys = gen_random_system(dim, count, 3, seed).unwrap();
        for f in sys.forms() {
            prop_assert!(closure_contains(&sys, f).unwrap());
        }
        prop_assert!(closure_contains(&sys, &QuadForm::zero(dim)).unwrap());
    }

    #[test]
    fn polynomial_forms_lie_in_the_closure(c in prop::collection::vec(-4i64..=4, 1..=5)) {
        let f = UPoly::from_i64(&c);
        for (name, sys) in gallery_pairs() {
            let z = closure_poly_form(&sys, &f).unwrap();
            prop_assert!(closure_contains(&sys, &z).unwrap(), "{}", name);
        }
    }

    #[test]
    fn kronecker_blocks_account_for_the_pencil(dim in 1usize..=4, seed in any::<u64>()) {
        let sys = rebase_pair(&gen_random_nonsingular_pair(dim, 3, seed).unwrap()).unwrap();
        let dec = kronecker_decompose(&sys).unwrap();
        let j = pencil_J(&sys).unwrap();
        let mut total = 0;
        let mut product = UPoly::one();
        let mut blocks = Vec::new();
        for b in &dec.blocks {
            total += b.prime.degree().unwrap() * b.exponent as usize * b.multiplicity;
            product = product.mul(&b.prime.pow(b.exponent * b.multiplicity as u32));
            prop_assert_eq!(&b.block_matrix, &b.prime.pow(b.exponent).companion());
            blocks.extend(std::iter::repeat_n(b.block_matrix.clone(), b.multiplicity));
        }
        prop_assert_eq!(total, dim);
        prop_assert_eq!(product, j.charpoly().unwrap());
        let p = &dec.base_change;
        prop_assert_eq!(p.inverse().unwrap().mul(&j).mul(p), QMatrix::block_diag(&blocks));
    }

    #[test]
    fn both_decisions_agree_on_pairs(dim in 1usize..=4, seed in any::<u64>()) {
        let sys = gen_random_nonsingular_pair(dim, 3, seed).unwrap();
        let d = theorem2_decide(&sys).unwrap();
        prop_assert!(d.agrees_with_theorem1);
        prop_assert_eq!(d.exists_n, theorem1_decide(&sys).exists_n);
        if let Some(w) = &d.witness {
            prop_assert!(w.form.signature() != 0);
            prop_assert!(closure_contains(&sys, &w.form).unwrap());
        }
    }
}

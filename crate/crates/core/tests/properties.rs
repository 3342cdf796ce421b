//! Randomized structural invariants across modules. Every suite runs on a
//! fixed seed, so failures are reproducible.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use liesym::corpus;
use liesym::exterior::KForm;
use liesym::liealg::LieAlgebra;
use liesym::matrix::Mat;
use liesym::monge;
use liesym::monge::polyform::PolyForm;
use liesym::poly::Poly;
use liesym::scalar::{int, rat, Rat};
use liesym::structures;
use liesym::suspension;

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn random_rat(rng: &mut StdRng) -> Rat {
    let num = rng.gen_range(-6i64..=6);
    let den = rng.gen_range(1i64..=3);
    rat(num, den)
}

fn random_form(rng: &mut StdRng, dim: usize, degree: usize, terms: usize) -> KForm {
    let mut f = KForm::zero(dim, degree);
    for _ in 0..terms {
        let mut idx: Vec<u8> = Vec::new();
        while idx.len() < degree {
            let c = rng.gen_range(1..=dim as u8);
            if !idx.contains(&c) {
                idx.push(c);
            }
        }
        f.add_signed_term(&idx, Poly::constant(random_rat(rng)));
    }
    f
}

fn random_vector(rng: &mut StdRng, dim: usize) -> Vec<Poly> {
    (0..dim).map(|_| Poly::constant(random_rat(rng))).collect()
}

/// All corpus algebras at their documented samples that satisfy Jacobi.
fn corpus_algebras() -> Vec<(String, LieAlgebra)> {
    let mut out = Vec::new();
    for entry in corpus::bundled() {
        for sample in corpus::entry_samples(&entry.file) {
            let g = entry.file.algebra.substitute(&sample);
            if g.jacobi_check().passed() {
                out.push((format!("{}{}", entry.id, corpus::sample_label(&sample)), g));
            }
        }
    }
    out
}

/// Random invertible rational matrix (unitriangular times unitriangular).
fn random_invertible(rng: &mut StdRng, n: usize) -> Mat {
    let mut lower = Mat::identity(n);
    let mut upper = Mat::identity(n);
    for i in 0..n {
        for j in 0..i {
            lower[(i, j)] = int(rng.gen_range(-2i64..=2));
            upper[(j, i)] = int(rng.gen_range(-2i64..=2));
        }
    }
    lower.matmul(&upper)
}

/// Random Jacobi-valid dim-4 algebras: random basis changes of corpus
/// algebras plus random nilpotent suspensions of dim-3 seeds.
fn random_dim4_algebras(rng: &mut StdRng, count: usize) -> Vec<LieAlgebra> {
    let pool: Vec<LieAlgebra> = corpus_algebras()
        .into_iter()
        .filter(|(_, g)| g.dim() == 4)
        .map(|(_, g)| g)
        .collect();
    let seeds3 = [LieAlgebra::heisenberg3(), LieAlgebra::abelian(3), LieAlgebra::sl2()];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g = if rng.gen_bool(0.5) {
            let base = &pool[rng.gen_range(0..pool.len())];
            base.change_basis(&random_invertible(rng, 4)).expect("invertible")
        } else {
            let h = &seeds3[rng.gen_range(0..seeds3.len())];
            let space = suspension::derivation_space(h).expect("constant");
            let mut m = Mat::zeros(3, 3);
            for d in &space.basis {
                let c = int(rng.gen_range(-2i64..=2));
                for i in 0..3 {
                    for j in 0..3 {
                        let add = c.clone() * d.matrix()[(i, j)].clone();
                        m[(i, j)] = m[(i, j)].clone() + add;
                    }
                }
            }
            let a = suspension::Derivation::new(h, m).expect("span of derivations");
            suspension::suspend(h, &a)
        };
        assert!(g.jacobi_check().passed());
        out.push(g);
    }
    out
}

/// Random nilpotent algebra built by iterated index-lowering suspensions
/// from a low-dimensional abelian seed. Constants keep the shape
/// `c^k_ij != 0 => k < min(i, j)`, which forces nilpotency.
fn random_nilpotent(rng: &mut StdRng, target_dim: usize) -> LieAlgebra {
    let mut g = LieAlgebra::abelian(rng.gen_range(1..=2));
    while g.dim() < target_dim {
        let basis = suspension::lowering_derivations(&g).expect("constant");
        let n = g.dim();
        let mut m = Mat::zeros(n, n);
        for d in &basis {
            let c = int(rng.gen_range(-2i64..=2));
            for i in 0..n {
                for j in 0..n {
                    let add = c.clone() * d.matrix()[(i, j)].clone();
                    m[(i, j)] = m[(i, j)].clone() + add;
                }
            }
        }
        let a = suspension::Derivation::new(&g, m).expect("span of derivations");
        g = suspension::suspend(&g, &a);
    }
    assert!(g.is_nilpotent().expect("constant"));
    g
}

// ------------------------------------------------------------ exterior laws

#[test]
fn wedge_is_associative_and_bilinear() {
    let mut r = rng(11);
    for _ in 0..40 {
        let dim = r.gen_range(3..=6);
        let da = r.gen_range(1..=2);
        let db = r.gen_range(1..=2);
        let dc = r.gen_range(1..=2);
        let a = random_form(&mut r, dim, da, 3);
        let b = random_form(&mut r, dim, db, 3);
        let c = random_form(&mut r, dim, dc, 3);
        let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        assert_eq!(left, right);

        let b2 = random_form(&mut r, dim, db, 2);
        let sum = b.add(&b2).unwrap();
        let lhs = a.wedge(&sum).unwrap();
        let rhs = a.wedge(&b).unwrap().add(&a.wedge(&b2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn wedge_graded_commutativity() {
    let mut r = rng(12);
    for _ in 0..60 {
        let dim = r.gen_range(2..=6);
        let da = r.gen_range(1..=3.min(dim));
        let db = r.gen_range(1..=3.min(dim));
        let a = random_form(&mut r, dim, da, 3);
        let b = random_form(&mut r, dim, db, 3);
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let expected = if (da * db) % 2 == 0 { ba } else { ba.neg() };
        assert_eq!(ab, expected);
    }
}

#[test]
fn interior_is_an_antiderivation() {
    let mut r = rng(13);
    for _ in 0..40 {
        let dim = r.gen_range(3..=6);
        let da = r.gen_range(1..=2);
        let db = r.gen_range(1..=2);
        let a = random_form(&mut r, dim, da, 3);
        let b = random_form(&mut r, dim, db, 3);
        let v = random_vector(&mut r, dim);
        let lhs = a.wedge(&b).unwrap().interior(&v).unwrap();
        let term1 = a.interior(&v).unwrap().wedge(&b).unwrap();
        let term2 = a.wedge(&b.interior(&v).unwrap()).unwrap();
        let rhs = if da % 2 == 0 { term1.add(&term2).unwrap() } else { term1.sub(&term2).unwrap() };
        assert_eq!(lhs, rhs);
        // i_v o i_v = 0
        if lhs.degree() >= 2 {
            assert!(lhs.interior(&v).unwrap().interior(&v).unwrap().is_zero());
        }
    }
}

#[test]
fn pfaffian_squares_to_determinant() {
    let mut r = rng(14);
    for dim in [2usize, 4, 6] {
        for _ in 0..12 {
            let w = random_form(&mut r, dim, 2, dim);
            let idx: Vec<u8> = (1..=dim as u8).collect();
            let pf = w.pfaffian(&KForm::basis(dim, &idx)).unwrap().as_constant().unwrap();
            let m = w.coefficient_matrix();
            let mat = Mat::from_rows(
                m.into_iter()
                    .map(|row| row.into_iter().map(|p| p.as_constant().unwrap()).collect())
                    .collect(),
            );
            assert_eq!(pf.clone() * pf, mat.det(), "dim {dim}");
        }
    }
}

// ----------------------------------------------------- differential algebra

/// The alternating-sum formula for the Chevalley-Eilenberg differential,
/// evaluated coefficient-by-coefficient: the independent oracle for the
/// antiderivation implementation.
fn ce_simplex_oracle(g: &LieAlgebra, form: &KForm) -> KForm {
    let n = g.dim();
    let k = form.degree();
    let mut out = KForm::zero(n, k + 1);
    for tuple in g.basis_tuples(k + 1) {
        let mut value = Poly::zero();
        for i in 0..tuple.len() {
            for j in i + 1..tuple.len() {
                let bracket = g.bracket_basis(tuple[i], tuple[j]);
                let mut args: Vec<Vec<Poly>> = vec![bracket];
                for (t, &idx) in tuple.iter().enumerate() {
                    if t != i && t != j {
                        let mut unit = vec![Poly::zero(); n];
                        unit[idx as usize - 1] = Poly::one();
                        args.push(unit);
                    }
                }
                let term = form.eval_on(&args);
                // (-1)^{i+j} with 0-based positions
                value = if (i + j) % 2 == 0 { &value + &term } else { &value - &term };
            }
        }
        out.add_signed_term(&tuple, value);
    }
    out
}

#[test]
fn ce_differential_matches_simplex_formula() {
    let mut r = rng(21);
    for (name, g) in corpus_algebras() {
        for _ in 0..3 {
            let degree = r.gen_range(1..=g.dim() - 1);
            let form = random_form(&mut r, g.dim(), degree, 3);
            let fast = g.ce_differential(&form).unwrap();
            let oracle = ce_simplex_oracle(&g, &form);
            assert_eq!(fast, oracle, "{name} degree {degree}");
        }
    }
}

#[test]
fn d_squared_vanishes_on_random_forms_over_corpus() {
    let mut r = rng(22);
    for (name, g) in corpus_algebras() {
        for _ in 0..4 {
            let degree = r.gen_range(1..=g.dim().saturating_sub(2).max(1));
            let form = random_form(&mut r, g.dim(), degree, 4);
            let dd = g.ce_differential(&g.ce_differential(&form).unwrap()).unwrap();
            assert!(dd.is_zero(), "{name}");
        }
    }
}

#[test]
fn d_is_an_antiderivation_over_corpus() {
    let mut r = rng(23);
    for (name, g) in corpus_algebras() {
        let dim = g.dim();
        for _ in 0..4 {
            let da = r.gen_range(1..=2.min(dim - 1));
            let db = r.gen_range(1..=2.min(dim - 1));
            let a = random_form(&mut r, dim, da, 3);
            let b = random_form(&mut r, dim, db, 3);
            let lhs = g.ce_differential(&a.wedge(&b).unwrap()).unwrap();
            let t1 = g.ce_differential(&a).unwrap().wedge(&b).unwrap();
            let t2 = a.wedge(&g.ce_differential(&b).unwrap()).unwrap();
            let rhs = if da % 2 == 0 { t1.add(&t2).unwrap() } else { t1.sub(&t2).unwrap() };
            assert_eq!(lhs, rhs, "{name}");
        }
    }
}

#[test]
fn jacobi_equivalent_to_d_squared_zero() {
    let mut r = rng(24);
    // valid algebras and random mutations of them, both routes compared
    let mut algebras = random_dim4_algebras(&mut r, 10);
    for _ in 0..10 {
        let mut g = LieAlgebra::abelian(4);
        for _ in 0..3 {
            let i = r.gen_range(1..=3u8);
            let j = r.gen_range(i + 1..=4u8);
            let k = r.gen_range(1..=4u8);
            g = g.with_simple_bracket(i, j, k, int(r.gen_range(-2i64..=2)));
        }
        algebras.push(g);
    }
    for g in algebras {
        let d2_zero = (1..=g.dim() as u8).all(|k| {
            let d1 = g.ce_differential(&KForm::basis(g.dim(), &[k])).unwrap();
            g.ce_differential(&d1).unwrap().is_zero()
        });
        assert_eq!(g.jacobi_check().passed(), d2_zero);
    }
}

#[test]
fn no_four_dimensional_algebra_is_perfect() {
    let mut r = rng(25);
    for (name, g) in corpus_algebras() {
        if g.dim() == 4 {
            assert!(!g.is_perfect().unwrap(), "{name}");
        }
    }
    for g in random_dim4_algebras(&mut r, 30) {
        assert!(!g.is_perfect().unwrap());
    }
}

// ------------------------------------------------------ structure detectors

#[test]
fn contact_verdicts_match_the_dimension3_table() {
    for entry in corpus::bundled().iter().filter(|e| e.id.starts_with("T2-")) {
        let g = &entry.file.algebra;
        let expected = entry.file.claims.contact.expect("T2 entries carry contact claims");
        let scan = structures::is_contact(g).unwrap();
        assert_eq!(scan.exists, expected, "{}", entry.id);
    }
}

#[test]
fn genre_stays_below_dimension_without_a_contact_form() {
    // on the two non-contact 3-dimensional algebras no covector reaches
    // genre 3
    for entry in corpus::bundled() {
        if entry.file.claims.contact != Some(false) {
            continue;
        }
        let g = &entry.file.algebra;
        for i in 1..=3u8 {
            let alpha = KForm::basis(3, &[i]);
            assert!(structures::genre(g, &alpha).unwrap() < 3, "{} e{}*", entry.id, i);
        }
        // and a few combinations
        let alpha = KForm::basis(3, &[1])
            .add(&KForm::basis(3, &[2]).scale_rat(&int(2)))
            .unwrap()
            .add(&KForm::basis(3, &[3]).scale_rat(&int(-3)))
            .unwrap();
        assert!(structures::genre(g, &alpha).unwrap() < 3, "{}", entry.id);
    }
}

#[test]
fn genre_reaches_dimension_exactly_for_nondegenerate_pairs() {
    // odd dimension: genre = dim iff the witness is contact;
    // even dimension: genre = dim iff d(alpha) is symplectic
    for (name, g) in corpus_algebras() {
        let n = g.dim();
        if n % 2 == 1 {
            let scan = structures::is_contact(&g).unwrap();
            if let Some(w) = scan.witness {
                assert_eq!(structures::genre(&g, &w.form).unwrap(), n, "{name}");
            }
        } else {
            let scan = structures::has_exact_symplectic(&g).unwrap();
            if let Some(w) = scan.witness {
                let pot = w.potential.unwrap();
                assert_eq!(structures::genre(&g, &pot).unwrap(), n, "{name}");
            }
        }
    }
}

#[test]
fn exact_symplectic_implies_symplectic_and_open_orbits() {
    for (name, g) in corpus_algebras() {
        if g.dim() % 2 != 0 {
            continue;
        }
        let exact = structures::has_exact_symplectic(&g).unwrap();
        if !exact.exists {
            continue;
        }
        let symp = structures::has_symplectic(&g).unwrap();
        assert!(symp.exists, "{name}");
        let w = exact.witness.unwrap();
        assert!(structures::is_exact(&g, &w.form).unwrap(), "{name}");
        // open coadjoint orbit through the potential
        let pot = w.potential.unwrap();
        let f: Vec<Rat> = (1..=g.dim() as u8)
            .map(|i| pot.coeff(&[i]).as_constant().unwrap())
            .collect();
        assert_eq!(g.coadjoint_tangent_dim(&f).unwrap(), g.dim(), "{name}");
    }
}

#[test]
fn unimodular_even_corpus_algebras_have_no_exact_symplectic_form() {
    for (name, g) in corpus_algebras() {
        if g.dim() % 2 == 0 && g.unimodular_check().passed() {
            let scan = structures::has_exact_symplectic(&g).unwrap();
            assert!(!scan.exists, "{name}");
            assert!(scan.obstruction.is_zero(), "{name}");
        }
    }
}

#[test]
fn contact_certificate_scales_with_odd_power() {
    let mut r = rng(31);
    for (name, g) in corpus_algebras() {
        let n = g.dim();
        if n % 2 == 0 {
            continue;
        }
        let m = n / 2;
        let scan = structures::is_contact(&g).unwrap();
        let Some(w) = scan.witness else { continue };
        for _ in 0..3 {
            let s = int(r.gen_range(1i64..=5) * if r.gen_bool(0.5) { 1 } else { -1 });
            let scaled = w.form.scale_rat(&s);
            let da = g.ce_differential(&scaled).unwrap();
            let top = scaled.wedge(&da.wedge_pow(m).unwrap()).unwrap().top_coefficient();
            let expected = w.certificate.scale(&s.pow((m + 1) as i32));
            assert_eq!(top, expected, "{name}");
            assert!(!top.is_zero(), "{name}: scaling must preserve the contact property");
        }
    }
}

// ------------------------------------------------------------- suspensions

#[test]
fn suspension_results_are_lie_algebras_and_detectable() {
    // successful symplectizations and contactizations are accepted by the
    // corresponding detectors
    let h = LieAlgebra::heisenberg3();
    let alpha = KForm::basis(3, &[1]);
    let res = suspension::symplectize_contact(&h, &alpha, None).unwrap().result.unwrap();
    assert!(res.algebra.jacobi_check().passed());
    assert!(structures::has_symplectic(&res.algebra).unwrap().exists);

    let aff = LieAlgebra::abelian(2).with_simple_bracket(1, 2, 1, int(1));
    let pot = KForm::basis(2, &[1]).neg();
    let res = suspension::contactize(&aff, &pot, None).unwrap().result.unwrap();
    assert!(res.algebra.jacobi_check().passed());
    assert!(structures::is_contact(&res.algebra).unwrap().exists);
}

#[test]
fn contactize_gauge_invariance_randomized() {
    let mut r = rng(41);
    // h = aff(1) x aff(1): exact symplectic with potential found by the scan
    let h = LieAlgebra::abelian(4)
        .with_simple_bracket(1, 2, 1, int(1))
        .with_simple_bracket(3, 4, 3, int(1));
    let scan = structures::has_exact_symplectic(&h).unwrap();
    let alpha = scan.witness.unwrap().potential.unwrap();
    let space = suspension::derivation_space(&h).unwrap();
    // Pi = Ker alpha; inner derivations ad_x with x in Pi gauge the choice
    let alpha_row: Vec<Rat> =
        (1..=4u8).map(|i| alpha.coeff(&[i]).as_constant().unwrap()).collect();
    let pi = Mat::from_rows(vec![alpha_row]).kernel_basis();
    for _ in 0..10 {
        let mut base = Mat::zeros(4, 4);
        for d in &space.basis {
            let c = int(r.gen_range(-2i64..=2));
            for i in 0..4 {
                for j in 0..4 {
                    let add = c.clone() * d.matrix()[(i, j)].clone();
                    base[(i, j)] = base[(i, j)].clone() + add;
                }
            }
        }
        let a = suspension::Derivation::new(&h, base).unwrap();
        // x = random element of Pi
        let mut x = vec![int(0); 4];
        for b in &pi {
            let c = int(r.gen_range(-2i64..=2));
            for k in 0..4 {
                x[k] = x[k].clone() + c.clone() * b[k].clone();
            }
        }
        let mut ad_x = Mat::zeros(4, 4);
        for j in 1..=4u8 {
            let mut unit = vec![int(0); 4];
            unit[j as usize - 1] = int(1);
            let col = h.bracket_rat(&x, &unit).unwrap();
            for k in 0..4 {
                ad_x[(k, j as usize - 1)] = col[k].as_constant().unwrap();
            }
        }
        let shift = suspension::Derivation::new(&h, ad_x).unwrap();
        let r1 = suspension::contactize(&h, &alpha, Some(&a)).unwrap();
        let r2 = suspension::contactize(&h, &alpha, Some(&a.plus(&shift))).unwrap();
        assert_eq!(r1.result.is_some(), r2.result.is_some());
    }
}

#[test]
fn prop4_agrees_with_prop3_on_contact_differentials() {
    // whenever omega = d(gamma) with gamma contact, the 2-form route and the
    // contact-form route agree on existence
    let cases: Vec<(LieAlgebra, KForm)> = vec![
        (LieAlgebra::heisenberg3(), KForm::basis(3, &[1])),
        (LieAlgebra::sl2(), KForm::basis(3, &[2])),
        (LieAlgebra::sl2(), KForm::basis(3, &[3])),
        (LieAlgebra::so3(), KForm::basis(3, &[1])),
    ];
    for (h, gamma) in cases {
        let da = h.ce_differential(&gamma).unwrap();
        let via_contact = suspension::symplectize_contact(&h, &gamma, None).unwrap();
        let via_2form = suspension::symplectize_2form(&h, &da).unwrap();
        assert_eq!(via_contact.result.is_some(), via_2form.result.is_some());
    }
}

#[test]
fn random_nilpotent_suspensions_are_nilpotent_and_unimodular() {
    let mut r = rng(42);
    for _ in 0..20 {
        let dim = if r.gen_bool(0.5) { 4 } else { 5 };
        let g = random_nilpotent(&mut r, dim);
        assert!(g.jacobi_check().passed());
        assert!(g.unimodular_check().passed());
    }
}

// ------------------------------------------------------------- monge layer

#[test]
fn pullback_commutes_with_exterior_derivative() {
    let mut r = rng(51);
    let src: Vec<String> = (1..=3).map(|i| format!("x{i}")).collect();
    let tgt: Vec<String> = vec!["y1".into(), "y2".into(), "y3".into()];
    for _ in 0..15 {
        // random polynomial substitution x_i -> poly(y)
        let mut map = BTreeMap::new();
        for v in &src {
            let mut p = Poly::zero();
            for _ in 0..2 {
                let a = r.gen_range(0..3usize);
                let b = r.gen_range(0..3usize);
                let term = &Poly::var(&tgt[a]) * &Poly::var(&tgt[b]);
                p = &p + &term.scale(&random_rat(&mut r));
            }
            p = &p + &Poly::var(&tgt[r.gen_range(0..3)]);
            map.insert(v.clone(), p);
        }
        // random 1-form with polynomial coefficients
        let mut form = PolyForm::zero(&src, 1);
        for i in 1..=3u8 {
            let c = &Poly::var(&src[r.gen_range(0..3)]) * &Poly::constant(random_rat(&mut r));
            form.add_signed_term(&[i], c);
        }
        let lhs = form.exterior_derivative().pullback(&tgt, &map).unwrap();
        let rhs = form.pullback(&tgt, &map).unwrap().exterior_derivative();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn canonical_j_lies_in_the_antiinvariant_class() {
    // omega(jX, jY) = -omega(X, Y) for j built from randomized admissible
    // pairs (images of the canonical pair under a random basis change)
    let mut r = rng(52);
    let es = monge::EStructure::new(LieAlgebra::abelian(4), liesym::parse::FrameLabels::standard())
        .unwrap();
    for _ in 0..15 {
        let p = random_invertible(&mut r, 4);
        let transform = |f: &KForm| -> KForm {
            let m = f.coefficient_matrix();
            let mut mm = Mat::zeros(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    mm[(i, j)] = m[i][j].as_constant().unwrap();
                }
            }
            let new = p.transpose().matmul(&mm).matmul(&p);
            let mut out = KForm::zero(4, 2);
            for i in 0..4u8 {
                for j in i + 1..4u8 {
                    out.add_signed_term(
                        &[i + 1, j + 1],
                        Poly::constant(new[(i as usize, j as usize)].clone()),
                    );
                }
            }
            out
        };
        let omega = transform(&es.omega());
        let theta = transform(&es.theta());
        let j = monge::j_from_theta(&omega, &theta).unwrap();
        // check omega(jx, jy) = -omega(x, y) on all basis pairs
        let m = omega.coefficient_matrix();
        let mut om = Mat::zeros(4, 4);
        for a in 0..4 {
            for b in 0..4 {
                om[(a, b)] = m[a][b].as_constant().unwrap();
            }
        }
        let twisted = j.transpose().matmul(&om).matmul(&j);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(twisted[(a, b)], -om[(a, b)].clone());
            }
        }
    }
}

#[test]
fn jet_output_always_has_monge_ampere_shape() {
    let mut r = rng(53);
    let vars: Vec<String> = monge::jet::CHART_VARS.iter().map(|s| s.to_string()).collect();
    for _ in 0..25 {
        // random effective-looking 2-form with coefficients polynomial in q
        let mut theta = PolyForm::zero(&vars, 2);
        for i in 1..=4u8 {
            for j in i + 1..=4u8 {
                if r.gen_bool(0.6) {
                    let mut c = Poly::constant(random_rat(&mut r));
                    if r.gen_bool(0.4) {
                        c = &c * &Poly::var(if r.gen_bool(0.5) { "q1" } else { "q2" });
                    }
                    if r.gen_bool(0.3) {
                        c = &c * &Poly::var(if r.gen_bool(0.5) { "p1" } else { "p2" });
                    }
                    theta.add_signed_term(&[i, j], c);
                }
            }
        }
        let pde = monge::emit_pde(&theta).unwrap();
        assert!(pde.is_monge_ampere_shape(), "theta = {theta}, pde = {}", pde.display());
    }
}

#[test]
fn coframe_round_trip_on_random_nilpotent_algebras() {
    let mut r = rng(54);
    for _ in 0..8 {
        let dim = r.gen_range(3..=5);
        let g = random_nilpotent(&mut r, dim);
        let frame = monge::left_invariant_frame(&g).unwrap();
        let co = monge::dual_coframe(&frame).unwrap();
        assert!(monge::bch::coframe_satisfies_structure_equations(&g, &co).unwrap());
    }
}

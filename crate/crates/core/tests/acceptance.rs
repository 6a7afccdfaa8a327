//! Acceptance gate: one line per criterion, then a single assertion.
//!
//! Run with `cargo test -p cmvdvz --test acceptance -- --nocapture` to see the
//! table.

use cmvdvz::diagram::{verify_dvz_composition, verify_splitting};
use cmvdvz::dvz::{forward, invert, DEFAULT_TOL};
use cmvdvz::matrices::{build_cmv, build_k, build_l, build_m, jacobi_from_k, BandedMatrix};
use cmvdvz::measures::{dvz_pushforward, support_e};
use cmvdvz::oprl::{cheb_form, recurrence_eval};
use cmvdvz::quadrature::{gram_line, stieltjes_jacobi};
use cmvdvz::{Error, Family, QuadratureSpec, Tridiagonal, VerblunskySequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LAMBDAS: [f64; 6] = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];

fn paper_families() -> Vec<Family> {
    vec![
        Family::bernstein_szego(0.6).unwrap(),
        Family::lebesgue_mass(0.5).unwrap(),
        Family::second_kind(0.3).unwrap(),
    ]
}

fn jacobi(seq: &VerblunskySequence, lambda: f64, n: usize) -> Tridiagonal {
    jacobi_from_k(&build_k(seq, 1.0, lambda, n).unwrap(), 1.0, lambda).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::NAN } else { m.max(v) })
}

fn orthonormality(spec: &QuadratureSpec) -> Outcome {
    let n = 17;
    let mut defects = Vec::new();
    for f in paper_families() {
        let seq = f.sequence(n + 1).unwrap();
        for &lambda in &LAMBDAS {
            let j = jacobi(&seq, lambda, n + 1);
            let nu = dvz_pushforward(&f.measure(), lambda).unwrap();
            let g = gram_line(&nu, n, |x| recurrence_eval(&j, x, n - 1).unwrap(), spec).unwrap();
            defects.push(g.defect);
        }
    }
    let d = worst(defects);
    Outcome {
        pass: d < 1e-7,
        detail: format!("max Gram defect of q_0..q_16 = {d:.3e}"),
    }
}

fn closed_form_measures() -> Outcome {
    let samples = 200;
    let mut rel = 0.0f64;
    let mut atom_err = 0.0f64;
    for f in paper_families() {
        for &lambda in &LAMBDAS {
            let nu = dvz_pushforward(&f.measure(), lambda).unwrap();
            let segs = support_e(lambda).unwrap();
            let per = samples / segs.len();
            for &(a, b) in &segs {
                for i in 0..per {
                    let x = a + (b - a) * (i as f64 + 0.5) / per as f64;
                    let lib = nu.density_at(x);
                    let printed = f.nu_density(lambda, x).unwrap();
                    rel = rel.max((lib - printed).abs() / printed.abs());
                }
            }
            let expect = f.nu_atoms(lambda).unwrap();
            if expect.len() != nu.atoms().len() {
                atom_err = f64::INFINITY;
            }
            for (p, q) in expect.iter().zip(nu.atoms()) {
                atom_err = atom_err.max((p.0 - q.0).abs()).max((p.1 - q.1).abs());
            }
        }
    }
    Outcome {
        pass: rel < 1e-9 && atom_err < 1e-12,
        detail: format!("density rel err {rel:.3e}, atom err {atom_err:.3e}"),
    }
}

fn degree_table_ok(n: usize, q: Option<usize>, qt: Option<usize>) -> bool {
    let k = n / 2;
    if n % 2 == 0 {
        q == Some(k) && qt == k.checked_sub(1)
    } else {
        q.map_or(true, |d| d <= k) && qt == Some(k)
    }
}

fn chebyshev_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n_max = 16;
    let mut rel = 0.0f64;
    let mut table = true;
    let mut families = paper_families();
    families.push(Family::Free);
    for f in families {
        let seq = f.sequence(n_max + 1).unwrap();
        let forms: Vec<_> = (0..=n_max).map(|n| cheb_form(&seq, n).unwrap()).collect();
        for form in &forms {
            table &= degree_table_ok(form.n, form.q.degree(), form.qt.degree());
        }
        for _ in 0..100 {
            let mag = rng.gen_range(0.3..2.5);
            let lambda: f64 = if rng.gen_bool(0.5) { mag } else { -mag };
            let x = rng.gen_range(-(1.0 + mag)..(1.0 + mag));
            // q_n of K itself; J = Pi K Pi would flip signs for lambda < 0
            let k = build_k(&seq, 1.0, lambda, n_max + 1).unwrap().to_tridiagonal().unwrap();
            let rec = recurrence_eval(&k, x, n_max).unwrap();
            for (n, form) in forms.iter().enumerate() {
                let c = form.eval(lambda, x).unwrap();
                rel = rel.max((c - rec[n]).abs() / rec[n].abs().max(1.0));
            }
        }
    }
    Outcome {
        pass: rel < 1e-10 && table,
        detail: format!("max rel err {rel:.3e}, degree table {}", if table { "ok" } else { "MISMATCH" }),
    }
}

fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> (f64, f64, VerblunskySequence) {
    let l0 = rng.gen_range(0.2..3.0);
    let mag = rng.gen_range(0.2..3.0);
    let l1 = if rng.gen_bool(0.5) { mag } else { -mag };
    let alphas = (0..n).map(|_| rng.gen_range(-0.95..0.95)).collect();
    (l0, l1, VerblunskySequence::new(alphas).unwrap())
}

fn inverse_map() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 12;
    let mut err = 0.0f64;
    let mut rejected = 0;
    for _ in 0..100 {
        let (l0, l1, seq) = random_instance(&mut rng, n);
        let j = forward(&seq, l0, l1, n).unwrap();
        let p = invert(&j, DEFAULT_TOL).unwrap();
        err = err.max((p.lambda0() - l0).abs()).max((p.lambda1() - l1).abs());
        for (a, b) in p.alphas().values().iter().zip(seq.values()) {
            err = err.max((a - b).abs());
        }
    }
    for _ in 0..100 {
        let (l0, l1, seq) = random_instance(&mut rng, n);
        let mut j = forward(&seq, l0, l1, n).unwrap();
        // b_{N-1} enters no circle point
        let idx = rng.gen_range(0..n - 1);
        j.diag[idx] += 1e-3;
        if matches!(invert(&j, DEFAULT_TOL), Err(Error::NotDvz { .. })) {
            rejected += 1;
        }
    }
    Outcome {
        pass: err < 1e-12 && rejected == 100,
        detail: format!("round-trip err {err:.3e}, perturbed rejected {rejected}/100"),
    }
}

fn matrix_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 32;
    let (mut inv_err, mut sum_err) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let seq = VerblunskySequence::new((0..n).map(|_| rng.gen_range(-0.99..0.99)).collect())
            .unwrap();
        let l = build_l(&seq, n).unwrap().to_banded();
        let m = build_m(&seq, n).unwrap().to_banded();
        let id = BandedMatrix::identity(n);
        // complete 2x2 blocks: L covers rows 0..n, M rows 0..n-1 for even n
        let l2 = BandedMatrix::lin_comb(1.0, &l.mul(&l), -1.0, &id);
        let m2 = BandedMatrix::lin_comb(1.0, &m.mul(&m), -1.0, &id);
        inv_err = inv_err.max(l2.max_abs_on(0..n)).max(m2.max_abs_on(0..n - 1));
        let lm = BandedMatrix::lin_comb(1.0, &l, 1.0, &m);
        let lhs = BandedMatrix::lin_comb(1.0, &lm.mul(&lm), -2.0, &id);
        let c = build_cmv(&seq, n).unwrap();
        let rhs = BandedMatrix::lin_comb(1.0, &c, 1.0, &c.transpose());
        let diff = BandedMatrix::lin_comb(1.0, &lhs, -1.0, &rhs);
        sum_err = sum_err.max(diff.max_abs_on(0..n - 2));
    }
    Outcome {
        pass: inv_err <= 1e-15 && sum_err < 1e-13,
        detail: format!("L^2, M^2 err {inv_err:.3e}; (L+M)^2 - 2I - C - C^t err {sum_err:.3e}"),
    }
}

fn stieltjes_closure(spec: &QuadratureSpec) -> Outcome {
    let rows = 8;
    let mut err = 0.0f64;
    let mut families = paper_families();
    families.push(Family::Free);
    for f in families {
        let seq = f.sequence(rows).unwrap();
        for lambda in [0.5, 2.0] {
            let nu = dvz_pushforward(&f.measure(), lambda).unwrap();
            let s = stieltjes_jacobi(&nu, rows, spec).unwrap();
            let k = jacobi(&seq, lambda, rows);
            for (a, b) in s.diag.iter().chain(&s.offdiag).zip(k.diag.iter().chain(&k.offdiag)) {
                err = err.max((a - b).abs());
            }
        }
    }
    Outcome {
        pass: err < 1e-7,
        detail: format!("max entry err over 8 rows {err:.3e}"),
    }
}

fn diagram(spec: &QuadratureSpec) -> Outcome {
    let n = 16;
    let mut split = 0.0f64;
    let mut comp = 0.0f64;
    for f in [Family::Free, Family::bernstein_szego(0.4).unwrap(), Family::bernstein_szego(0.6).unwrap()] {
        let mu = f.measure();
        split = split.max(verify_splitting(&mu, n, spec).unwrap().max());
        let c = verify_dvz_composition(&mu, &f.sequence(n).unwrap(), n, spec).unwrap();
        comp = comp.max(c.gram).max(c.density).max(c.atoms);
    }
    Outcome {
        pass: split < 1e-7 && comp < 1e-7,
        detail: format!("splitting {split:.3e}, composition {comp:.3e}"),
    }
}

fn mass(spec: &QuadratureSpec) -> Outcome {
    let mut err = 0.0f64;
    let mut families = paper_families();
    families.push(Family::Free);
    for f in families {
        for &lambda in &LAMBDAS {
            let nu = dvz_pushforward(&f.measure(), lambda).unwrap();
            err = err.max((nu.total_mass(spec).unwrap() - 1.0).abs());
        }
    }
    Outcome {
        pass: err < 1e-8,
        detail: format!("max |mass - 1| {err:.3e}"),
    }
}

#[test]
fn acceptance() {
    let spec = QuadratureSpec::default();
    let results = [
        ("1 orthonormality", orthonormality(&spec)),
        ("2 closed-form measures", closed_form_measures()),
        ("3 chebyshev form", chebyshev_form()),
        ("4 inverse map", inverse_map()),
        ("5 matrix identities", matrix_identities()),
        ("6 stieltjes closure", stieltjes_closure(&spec)),
        ("7 diagram", diagram(&spec)),
        ("8 mass conservation", mass(&spec)),
    ];
    for (name, o) in &results {
        println!(
            "criterion {name}: {} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    let failed: Vec<_> = results.iter().filter(|(_, o)| !o.pass).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

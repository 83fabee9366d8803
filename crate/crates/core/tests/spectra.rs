use fractal_spectra::closed_form::{closed_form_spectrum, spectrum_g};
use fractal_spectra::level_ops::{hecke_operator, markov_operator, LevelMatrix};
use fractal_spectra::numeric_spectra::{
    compare_spectra, eigen_symmetric, eigenvector_g, moment_check, numeric_spectrum,
    relative_residual,
};
use fractal_spectra::GroupPreset;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn max_level(g: GroupPreset) -> usize {
    if g.is_binary() {
        7
    } else {
        5
    }
}

#[test]
fn closed_forms_match_the_eigensolver() {
    for g in GroupPreset::ALL {
        for n in 0..=max_level(g) {
            let closed = closed_form_spectrum(g, n).unwrap();
            let numeric = numeric_spectrum(g, n).unwrap();
            let c = compare_spectra(&closed, &numeric, 1e-9).unwrap();
            assert!(
                c.pass,
                "{} level {n}: deviation {:e}",
                g.tag(),
                c.max_deviation
            );
            assert_eq!(
                numeric.clustered().pairs.len(),
                closed.pairs.len(),
                "{} level {n}",
                g.tag()
            );
        }
    }
}

#[test]
fn spectra_do_not_depend_on_vertex_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in GroupPreset::ALL {
        let n = if g.is_binary() { 5 } else { 3 };
        let h = hecke_operator(g, n).unwrap();
        let closed = closed_form_spectrum(g, n).unwrap();
        for _ in 0..5 {
            let mut p: Vec<usize> = (0..h.dim()).collect();
            p.shuffle(&mut rng);
            let conj = LevelMatrix::from_fn(h.dim(), |i, j| h.get(p[i], p[j]).clone());
            let c = compare_spectra(&closed, &eigen_symmetric(&conj).unwrap(), 1e-9).unwrap();
            assert!(c.pass, "{} deviation {:e}", g.tag(), c.max_deviation);
        }
    }
}

#[test]
fn return_probabilities_are_kesten_moments() {
    for g in GroupPreset::ALL {
        let m = markov_operator(g, 4).unwrap();
        let ray = fractal_spectra::tree_groups::TreeWord::new(vec![g.ray_letter(); 4]);
        let r = moment_check(&m, ray.index(g.alphabet_size()), 12).unwrap();
        assert!(
            r.max_deviation <= 1e-9,
            "{}: {:e}",
            g.tag(),
            r.max_deviation
        );
        assert_eq!(r.moments.len(), 13);
        assert!((r.moments[0].1 - 1.0).abs() < 1e-12);
        // odd moments vanish only on bipartite graphs; all are bounded by 1
        assert!(r
            .moments
            .iter()
            .all(|&(_, a, b)| a.abs() <= 1.0 + 1e-12 && (0.0..=1.0).contains(&b)));
    }
}

#[test]
fn explicit_eigenvectors_solve_the_level_operator() {
    for n in 1..=6 {
        for p in &spectrum_g(n).pairs {
            let v = eigenvector_g(n, p.value).unwrap();
            let r = relative_residual(GroupPreset::G, n, &v, p.value).unwrap();
            assert!(
                r <= 1e-8,
                "level {n}, eigenvalue {}: residual {r:e}",
                p.value
            );
        }
    }
    assert!(eigenvector_g(3, 0.5).is_err());
}

#[test]
fn numeric_eigenvectors_are_orthonormal_with_small_residual() {
    for g in [GroupPreset::GammaBar, GroupPreset::GammaBarBar] {
        let e = numeric_spectrum(g, 5).unwrap();
        assert!(
            e.residual <= 1e-9 * e.norm.max(1.0),
            "{}: {:e}",
            g.tag(),
            e.residual
        );
        let v = e.vectors.as_ref().unwrap();
        let gram = v.transpose() * v;
        let off = (gram - nalgebra::DMatrix::<f64>::identity(v.ncols(), v.ncols()))
            .abs()
            .max();
        assert!(off <= 1e-9 * v.ncols() as f64);
    }
}

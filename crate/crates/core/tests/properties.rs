use num_traits::{One, Zero};
use proptest::prelude::*;

use fractal_spectra::closed_form::closed_form_spectrum;
use fractal_spectra::level_ops::{generator_images, hecke_operator, parse_rational, rational};
use fractal_spectra::report::fmt15;
use fractal_spectra::tree_groups::{apply_transducer, preset_transducer, TreeWord};
use fractal_spectra::GroupPreset;

fn preset() -> impl Strategy<Value = GroupPreset> {
    prop::sample::select(GroupPreset::ALL.to_vec())
}

/// A preset with a word of length 1..=6 over its alphabet.
fn preset_and_word() -> impl Strategy<Value = (GroupPreset, Vec<u8>)> {
    preset().prop_flat_map(|p| {
        let d = p.alphabet_size() as u8;
        (Just(p), prop::collection::vec(0..d, 1..=6))
    })
}

proptest! {
    #[test]
    fn level_images_agree_with_the_machine((p, w) in preset_and_word(), gen in 0usize..4) {
        let d = p.alphabet_size();
        let name = p.generator_names()[gen];
        let word = TreeWord::new(w);
        let image = apply_transducer(&preset_transducer(p, name).unwrap(), &word).unwrap();
        let table = generator_images(p, p.generator(name).unwrap(), word.len()).unwrap();
        prop_assert_eq!(table[word.index(d)], image.index(d));
        prop_assert_eq!(TreeWord::from_index(image.index(d), word.len(), d), image);
    }

    #[test]
    fn generators_are_tree_automorphisms((p, w) in preset_and_word(), cut in 0usize..6, gen in 0usize..4) {
        let name = p.generator_names()[gen];
        let t = preset_transducer(p, name).unwrap();
        let a = TreeWord::new(w.clone());
        let mut v = w.clone();
        let k = cut.min(v.len() - 1);
        v[k] = (v[k] + 1) % p.alphabet_size() as u8;
        let b = TreeWord::new(v);
        let (ia, ib) = (apply_transducer(&t, &a).unwrap(), apply_transducer(&t, &b).unwrap());
        // images agree exactly on the common prefix and then differ
        prop_assert_eq!(&ia.letters()[..k], &ib.letters()[..k]);
        prop_assert_ne!(ia.letters()[k], ib.letters()[k]);
    }

    #[test]
    fn generator_set_is_symmetric(p in preset(), n in 0usize..=5, gen in 0usize..4) {
        let n = if p.is_binary() { n + 2 } else { n };
        let g = p.generators()[gen];
        let f = generator_images(p, g, n).unwrap();
        let inv = generator_images(p, p.inverse(g), n).unwrap();
        for (j, &img) in f.iter().enumerate() {
            prop_assert_eq!(inv[img], j);
        }
    }

    #[test]
    fn hecke_operators_are_symmetric_and_four_regular(p in preset(), n in 0usize..=4) {
        let h = hecke_operator(p, n).unwrap();
        prop_assert!(h.is_symmetric());
        prop_assert!(h.row_sums().iter().all(|s| *s == rational(4, 1)));
        let dim: u64 = closed_form_spectrum(p, n).unwrap().pairs.iter().map(|e| e.mult).sum();
        prop_assert_eq!(dim as usize, h.dim());
    }

    #[test]
    fn printed_floats_keep_fifteen_digits(x in prop::num::f64::NORMAL) {
        let back: f64 = fmt15(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-14 * x.abs());
        prop_assert_eq!(fmt15(back), fmt15(x));
    }

    #[test]
    fn rationals_parse(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = rational(p, q);
        prop_assert_eq!(parse_rational(&r.to_string()).unwrap(), r.clone());
        prop_assert_eq!(parse_rational(&format!("{p}/{q}")).unwrap(), r);
    }
}

#[test]
fn degenerate_rationals_are_rejected() {
    assert!(parse_rational("1/0").is_err());
    assert!(parse_rational("").is_err());
    assert!(parse_rational("0").unwrap().is_zero());
    assert!(parse_rational("3/3").unwrap().is_one());
}

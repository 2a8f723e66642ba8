use persona_core::agreement::*;
use persona_core::labels::*;
use proptest::prelude::*;

/// Expands a tally into one category per rater and compares every pair.
fn pa_by_pairs(subjects: &[(u64, u64)]) -> f64 {
    let mut total = 0.0;
    for &(l, r) in subjects {
        let raters: Vec<u8> = std::iter::repeat_n(0, l as usize).chain(std::iter::repeat_n(1, r as usize)).collect();
        let (mut agree, mut all) = (0usize, 0usize);
        for i in 0..raters.len() {
            for j in i + 1..raters.len() {
                all += 1;
                agree += usize::from(raters[i] == raters[j]);
            }
        }
        total += agree as f64 / all as f64;
    }
    total / subjects.len() as f64
}

/// Builds the full 2x2 coincidence matrix and applies alpha = 1 - D_o / D_e.
fn alpha_by_coincidence(subjects: &[(u64, u64)]) -> f64 {
    let mut o = [[0.0f64; 2]; 2];
    for &(l, r) in subjects {
        let counts = [l as f64, r as f64];
        let m = counts[0] + counts[1];
        for c in 0..2 {
            for k in 0..2 {
                let pairs = if c == k { counts[c] * (counts[c] - 1.0) } else { counts[c] * counts[k] };
                o[c][k] += pairs / (m - 1.0);
            }
        }
    }
    let n_c = [o[0][0] + o[0][1], o[1][0] + o[1][1]];
    let n = n_c[0] + n_c[1];
    let d_o = (o[0][1] + o[1][0]) / n;
    let d_e = 2.0 * n_c[0] * n_c[1] / (n * (n - 1.0));
    1.0 - d_o / d_e
}

fn ac1_step_by_step(subjects: &[(u64, u64)]) -> f64 {
    let p_a = pa_by_pairs(subjects);
    let mut pi_right = 0.0;
    for &(l, r) in subjects {
        pi_right += r as f64 / (l + r) as f64;
    }
    pi_right /= subjects.len() as f64;
    let pi_left = 1.0 - pi_right;
    let p_e = pi_left * (1.0 - pi_left) + pi_right * (1.0 - pi_right);
    (p_a - p_e) / (1.0 - p_e)
}

fn tables() -> impl Strategy<Value = Vec<(u64, u64)>> {
    prop::collection::vec((2u64..=8).prop_flat_map(|m| (0..=m).prop_map(move |l| (l, m - l))), 1..=6)
}

proptest! {
    #[test]
    fn coefficients_match_brute_force(subjects in tables()) {
        let t = RatingTable::new(subjects.clone());
        prop_assert!((percent_agreement(&t).unwrap() - pa_by_pairs(&subjects)).abs() < 1e-10);
        let a = krippendorff_alpha_detailed(&t).unwrap();
        if !a.degenerate {
            prop_assert!((a.value - alpha_by_coincidence(&subjects)).abs() < 1e-10);
        }
        if let Ok(g) = gwet_gamma(&t) {
            prop_assert!((g - ac1_step_by_step(&subjects)).abs() < 1e-10);
            prop_assert!(g >= brennan_prediger(&t).unwrap() - 1e-12);
        }
    }

    #[test]
    fn coefficients_survive_category_swap(subjects in tables()) {
        let t = RatingTable::new(subjects);
        let s = t.swapped();
        prop_assert!((percent_agreement(&t).unwrap() - percent_agreement(&s).unwrap()).abs() < 1e-12);
        prop_assert!((krippendorff_alpha(&t).unwrap() - krippendorff_alpha(&s).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn vote_score_complement_and_scaling(l in 0u64..10_000, r in 0u64..10_000, k in 1u64..1000) {
        prop_assume!(l + r > 0);
        let v = VoteRecord::new(Scale::EI, l, r);
        let s = normalize_votes(&v).unwrap();
        prop_assert_eq!(s + normalize_votes(&v.swapped()).unwrap(), 1.0);
        prop_assert_eq!(s, normalize_votes(&VoteRecord::new(Scale::EI, l * k, r * k)).unwrap());
    }
}

#[test]
fn reported_percent_agreement_gives_reported_kappa() {
    let rows = [(0.87454, 0.74908), (0.80204, 0.60408), (0.83334, 0.66669), (0.90624, 0.81247)];
    for (p_a, kappa) in rows {
        assert!((kappa_bp_from_pa(p_a) - kappa).abs() < 1e-3);
    }
}

#[test]
fn subjects_with_one_rater_are_excluded() {
    let t = RatingTable::new([(1, 0), (0, 0), (3, 1)]);
    assert_eq!(t.excluded(), 2);
    assert_eq!(t.subjects(), &[(3, 1)]);
    assert!(RatingTable::new([(1, 0)]).is_empty());
    assert!(percent_agreement(&RatingTable::new([(0, 1)])).is_err());
}

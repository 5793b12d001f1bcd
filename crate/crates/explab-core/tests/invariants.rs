//! Randomized invariants over the whole valid parameter box.
//!
//! Each property here is something the analytical layer takes for granted:
//! cutoff orderings, the root definitions behind the derived thresholds, the
//! belief-update algebra, and the packed history representation. They are
//! cheap enough to run at full proptest case counts on every test run.

use explab_core::belief::{failures_to_cross, phi, phi_inverse, phi_iterate};
use explab_core::cutoffs::{cutoff_p_hat, cutoff_p_hat_n, cutoff_p_star_n, ordering_violations};
use explab_core::history::{Action, Player, PublicHistory};
use explab_core::params::ModelParams;
use explab_core::payoffs::{encouragement_value, encouragement_value_n, probe_value_n};
use explab_core::profiles::make_threshold_phat;
use proptest::prelude::*;

fn arb_params() -> impl Strategy<Value = ModelParams> {
    // m is tied to c and lambda so the good arm always nets a gain
    (0.02f64..0.95, 0.05f64..0.98, 0.1f64..5.0, 1.05f64..20.0, 0.01f64..0.99).prop_map(
        |(l, d, c, mult, p0)| {
            let m = c * mult / l;
            ModelParams::new(l, d, c, m, p0).unwrap()
        },
    )
}

fn arb_actions(max: usize) -> impl Strategy<Value = Vec<Action>> {
    proptest::collection::vec(prop_oneof![Just(Action::R), Just(Action::S)], 0..max)
}

proptest! {
    #[test]
    fn cutoff_orderings_hold_across_the_parameter_box(params in arb_params()) {
        let bad = ordering_violations(&params);
        prop_assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn derived_cutoffs_are_roots_of_their_defining_values(
        params in arb_params(),
        n in 0u32..25,
    ) {
        let scale = params.c + params.g();
        let pn = cutoff_p_star_n(&params, n);
        prop_assert!(
            probe_value_n(&params, pn, n).abs() < 1e-9 * scale,
            "probe value {} at its own root",
            probe_value_n(&params, pn, n)
        );
        let ph = cutoff_p_hat(&params);
        prop_assert!(encouragement_value(&params, ph).abs() < 1e-9 * scale);
        let phn = cutoff_p_hat_n(&params, n);
        prop_assert!(encouragement_value_n(&params, phn, n).abs() < 1e-9 * scale);
    }

    #[test]
    fn failure_updates_are_pessimistic_and_invertible(
        params in arb_params(),
        p in 1e-6f64..0.999_999,
    ) {
        let q = phi(p, &params);
        prop_assert!(q < p && q > 0.0);
        let back = phi_inverse(q, &params).unwrap();
        prop_assert!((back - p).abs() < 1e-10, "roundtrip {back} vs {p}");
    }

    #[test]
    fn iterated_update_agrees_with_stepwise_application(
        params in arb_params(),
        p in 1e-6f64..0.999_999,
        k in 0u32..40,
    ) {
        let mut stepped = p;
        for _ in 0..k {
            stepped = phi(stepped, &params);
        }
        let jumped = phi_iterate(p, k, &params);
        prop_assert!((stepped - jumped).abs() < 1e-9 * (1.0 + k as f64));
    }

    #[test]
    fn crossing_count_brackets_the_cutoff(
        params in arb_params(),
        cut in 0.001f64..0.995,
    ) {
        let k = failures_to_cross(params.p0, cut, &params);
        if k == 0 {
            prop_assert!(params.p0 < cut);
        } else {
            prop_assert!(phi_iterate(params.p0, k, &params) < cut);
            prop_assert!(phi_iterate(params.p0, k - 1, &params) >= cut);
        }
    }

    #[test]
    fn history_counters_match_a_from_scratch_recount(actions in arb_actions(60)) {
        let mut h = PublicHistory::empty();
        for &a in &actions {
            h = h.extend(a).unwrap();
        }
        let total = actions.iter().filter(|&&a| a == Action::R).count() as u32;
        prop_assert_eq!(h.n_e(), total);
        for pl in [Player::P1, Player::P2] {
            let own: Vec<Action> = actions
                .iter()
                .copied()
                .enumerate()
                .filter(|(i, _)| (i % 2 == 0) == (pl == Player::P1))
                .map(|(_, a)| a)
                .collect();
            let ne = own.iter().filter(|&&a| a == Action::R).count() as u32;
            let trailing = own.iter().rev().take_while(|&&a| a == Action::R).count() as u32;
            prop_assert_eq!(h.n_e_i(pl), ne);
            prop_assert_eq!(h.u_i(pl), trailing);
            prop_assert_eq!(h.d_i(pl), ne - trailing);
        }
    }

    #[test]
    fn parent_inverts_extend_and_render_roundtrips(actions in arb_actions(60)) {
        let mut h = PublicHistory::empty();
        for &a in &actions {
            h = h.extend(a).unwrap();
        }
        prop_assert_eq!(PublicHistory::parse(&h.render()).unwrap(), h);
        if let Some((up, last)) = h.parent() {
            prop_assert_eq!(last, *actions.last().unwrap());
            let mut expect = PublicHistory::empty();
            for &a in &actions[..actions.len() - 1] {
                expect = expect.extend(a).unwrap();
            }
            prop_assert_eq!(up, expect);
        } else {
            prop_assert!(actions.is_empty());
        }
    }

    #[test]
    fn posteriors_stay_in_the_unit_interval_off_path(
        actions in arb_actions(24),
        p0 in 0.05f64..0.95,
    ) {
        let params = ModelParams::new(0.2, 0.9, 1.0, 10.0, p0).unwrap();
        let prof = make_threshold_phat(&params);
        let mut h = PublicHistory::empty();
        for &a in &actions {
            h = h.extend(a).unwrap();
        }
        let nb = prof.beliefs(&h);
        for pl in [Player::P1, Player::P2] {
            let b = nb.of(pl);
            let p = b.p(&params);
            prop_assert!((0.0..=1.0).contains(&p), "p = {p}");
            prop_assert!((0.0..=1.0).contains(&b.kappa), "kappa = {}", b.kappa);
        }
    }
}

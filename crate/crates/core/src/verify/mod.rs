//! Brute-force references, the exhaustive verification harness and
//! size-scaling reports.

mod harness;
mod oracle;
mod scaling;

pub use harness::{
    exhaustive_verify, Failure, Family, Form, SimMode, VerificationReport, MAX_EXHAUSTIVE_N,
};
pub use oracle::{oracle_eval, parity_average_identity_holds, ClassicalFunction, ClassicalInput};
pub use scaling::{scaling_table, ScalingFamily, ScalingRow, ScalingTable, TRule};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports() {
        let r = exhaustive_verify(&Family::Or, 6, Form::Gate, SimMode::Branches).unwrap();
        assert!(r.passed());
        assert_eq!(r.inputs_tested, 64);
        let r = exhaustive_verify(
            &Family::Counting { l: None },
            3,
            Form::Gadget,
            SimMode::Branches,
        )
        .unwrap();
        assert!(r.passed());
        assert!(r.branches_tested <= 8 * 8);
        for t in 1..=5 {
            for l in 0..crate::builders::bit_length(t) {
                let f = Family::ThresholdCombined { t, l: Some(l) };
                assert!(exhaustive_verify(&f, 5, Form::Gate, SimMode::Branches)
                    .unwrap()
                    .passed());
            }
        }
        let c = exhaustive_verify(
            &Family::Counting { l: None },
            4,
            Form::Gate,
            SimMode::Coherent,
        )
        .unwrap();
        assert!(c.passed() && c.branches_tested == 16);
        assert!(exhaustive_verify(&Family::Or, 13, Form::Gate, SimMode::Branches).is_err());
        let json: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json, r);
        assert!(r.to_csv().unwrap().starts_with("family,params,n,"));
    }

    #[test]
    fn failures_are_reported() {
        // OR against the parity of two bits disagrees only on input 11.
        let c = crate::builders::build_or(2).unwrap();
        let f = ClassicalFunction::Parity { n: 2, mask: 0b11 };
        let failures: Vec<Failure> = harness::check_all(&c, &f, 1, 2, SimMode::Branches)
            .unwrap()
            .into_iter()
            .flat_map(|r| r.1)
            .collect();
        assert_eq!(failures.len(), 1);
        assert_eq!(
            (
                failures[0].input.as_str(),
                failures[0].expected.as_str(),
                failures[0].observed.as_str()
            ),
            ("11", "0", "1")
        );
    }

    #[test]
    fn scaling_rows() {
        let t = scaling_table(ScalingFamily::Or, &[4, 8, 16, 32]).unwrap();
        assert!(t.depth_constant);
        assert!(!t.ratio_flag);
        assert!(t.rows.iter().all(|r| r.ratio.is_finite() && r.ratio > 0.0));
        assert!(t.to_csv().unwrap().starts_with("n,t,l,"));
        let half = TRule::Fraction { num: 1, den: 2 };
        let c = scaling_table(ScalingFamily::ThresholdCombined { t: half }, &[8, 16]).unwrap();
        assert_eq!(c.rows[0].t, Some(4));
        assert_eq!(c.rows[0].l, Some(1));
    }
}

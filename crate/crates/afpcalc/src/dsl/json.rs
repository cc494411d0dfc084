//! Stable JSON rendering of result reports.

use crate::engine::ResultReport;

/// Serialize a report to the wire schema: `status`, `summands` (kind /
/// param / weight), `fdim`, `in_r0`, `locators`, `certificate` (rule /
/// data), `diagnostics`. Key order follows field declaration order and
/// every exact value renders as a string (`"p/q"`, `"inf"`), so output
/// is byte-stable for identical inputs.
pub fn result_to_json(report: &ResultReport) -> String {
    serde_json::to_string(report).expect("reports contain no non-serializable data")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{free_product_over_scalars, Problem};
    use crate::model::{SummandKind, TracialAlgebra};
    use crate::rat::ExtRat;

    fn lf2_squared() -> ResultReport {
        let a = TracialAlgebra::single(SummandKind::Ifgf(ExtRat::int(2)));
        let b = TracialAlgebra::single(SummandKind::Ifgf(ExtRat::int(2)));
        free_product_over_scalars(a, b)
    }

    #[test]
    fn resolved_report_uses_the_documented_schema() {
        let js = result_to_json(&lf2_squared());
        assert!(js.starts_with(
            r#"{"status":"resolved","summands":[{"kind":"ifgf","param":"4","weight":"1"}],"fdim":"4","in_r0":true,"locators":["#
        ), "{js}");
        assert!(js.contains(r#""certificate":[{"rule":""#));
    }

    #[test]
    fn rendering_is_byte_stable() {
        assert_eq!(
            result_to_json(&lf2_squared()),
            result_to_json(&lf2_squared())
        );
    }

    #[test]
    fn partial_report_carries_an_unresolved_descriptor() {
        let doc = "\
algebra A {
  summand a0 { kind = matrix(2); weight = 1; }
}
algebra B {
  summand b0 { kind = matrix(2); weight = 1; }
}
algebra D {
  summand d0 { kind = matrix(1); weight = 1/2; }
  summand d1 { kind = matrix(1); weight = 1/2; }
}
embed D into A {
  d0 -> { a0: mult 1 };
  d1 -> { a0: mult 1 };
}
embed D into B {
  d0 -> { b0: mult 1 };
  d1 -> { b0: mult 1 };
}
";
        let p: Problem = crate::dsl::parse_problem(doc)
            .unwrap()
            .to_problem()
            .unwrap();
        let js = result_to_json(&crate::engine::compute(&p));
        assert!(js.contains(r#""status":"partial""#), "{js}");
        assert!(js.contains(r#""kind":"unresolved""#), "{js}");
        assert!(js.contains(r#""fdim":"1""#), "{js}");
    }

    #[test]
    fn error_report_carries_diagnostics() {
        let a = TracialAlgebra::single(SummandKind::Ifgf(ExtRat::int(2)));
        let bad = TracialAlgebra::new(vec![crate::model::Summand::new(
            SummandKind::Ifgf(ExtRat::int(2)),
            ExtRat::ratio(1, 2),
        )]);
        let js = result_to_json(&free_product_over_scalars(a, bad));
        assert!(js.contains(r#""status":"error""#), "{js}");
        assert!(js.contains(r#""diagnostics":[{"path":"#), "{js}");
    }
}

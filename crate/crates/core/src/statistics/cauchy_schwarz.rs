use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CsVerdict {
    /// `g2_sas^2 / (g2_ss * g2_asas)`.
    pub violation_ratio: f64,
    pub nonclassical: bool,
}

/// Classicality test `[g2_sas]^2 <= g2_ss * g2_asas`.
pub fn cauchy_schwarz_check(g2_sas: f64, g2_ss: f64, g2_asas: f64) -> Result<CsVerdict> {
    for (name, v) in [("g2_sas", g2_sas), ("g2_ss", g2_ss), ("g2_asas", g2_asas)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidInput(format!("{name} = {v} must be finite and >= 0")));
        }
    }
    let autos = g2_ss * g2_asas;
    if autos == 0.0 {
        return Err(Error::Undefined("autos unmeasurable".into()));
    }
    let violation_ratio = g2_sas * g2_sas / autos;
    Ok(CsVerdict { violation_ratio, nonclassical: violation_ratio > 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_cases() {
        let v = cauchy_schwarz_check(2.0, 2.0, 2.0).unwrap();
        assert_eq!(v.violation_ratio, 1.0);
        assert!(!v.nonclassical);
        let v = cauchy_schwarz_check(10.0, 2.0, 2.0).unwrap();
        assert_eq!(v.violation_ratio, 25.0);
        assert!(v.nonclassical);
        let v = cauchy_schwarz_check(1.0, 2.0, 2.0).unwrap();
        assert_eq!(v.violation_ratio, 0.25);
        assert!(!v.nonclassical);
    }

    #[test]
    fn zero_autos_are_unmeasurable() {
        match cauchy_schwarz_check(100.0, 0.0, 0.0) {
            Err(Error::Undefined(m)) => assert_eq!(m, "autos unmeasurable"),
            other => panic!("{other:?}"),
        }
        assert!(cauchy_schwarz_check(f64::NAN, 1.0, 1.0).is_err());
        assert!(cauchy_schwarz_check(-1.0, 1.0, 1.0).is_err());
    }
}

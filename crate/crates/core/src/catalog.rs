//! Built-in operators with known answers.

use serde::Serialize;

use crate::symbols::{Classification, MonomialSpec, SpecDocument};
use crate::Result;

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub coeff: &'static str,
    pub a: f64,
    pub b: f64,
    /// Closed-form weight `h(s)`.
    pub h: &'static str,
    pub expected: Classification,
    pub about: &'static str,
}

impl CatalogEntry {
    pub fn document(&self) -> SpecDocument {
        SpecDocument {
            name: Some(self.name.into()),
            coeff_expr: self.coeff.into(),
            coeff_head: Vec::new(),
            a: self.a,
            b: self.b,
            h_expr: Some(self.h.into()),
        }
    }

    pub fn spec(&self) -> Result<MonomialSpec> {
        MonomialSpec::from_document(&self.document())
    }
}

pub const CATALOG: [CatalogEntry; 7] = [
    CatalogEntry {
        name: "volterra",
        coeff: "1/(n+1)",
        a: 1.0,
        b: 1.0,
        h: "1/(s+1/2)",
        expected: Classification::Compact,
        about: "Volterra integration Vf(x) = ∫₀ˣ f",
    },
    CatalogEntry {
        name: "hardy",
        coeff: "1/(n+1)",
        a: 1.0,
        b: 0.0,
        h: "1/(s+1/2)",
        expected: Classification::BoundedNotCompact,
        about: "Hardy averaging Hf(x) = (1/x)∫₀ˣ f",
    },
    CatalogEntry {
        name: "shift",
        coeff: "1",
        a: 1.0,
        b: 1.0,
        h: "1",
        expected: Classification::BoundedNotCompact,
        about: "multiplication by x, xⁿ ↦ xⁿ⁺¹",
    },
    CatalogEntry {
        name: "t1",
        coeff: "1",
        a: 2.0,
        b: 0.0,
        h: "1",
        expected: Classification::Unbounded,
        about: "xⁿ ↦ x²ⁿ",
    },
    CatalogEntry {
        name: "t2",
        coeff: "1/(2*n+1)",
        a: 2.0,
        b: 1.0,
        h: "1/(2*s)",
        expected: Classification::Unbounded,
        about: "xⁿ ↦ x²ⁿ⁺¹/(2n+1)",
    },
    CatalogEntry {
        name: "t3",
        coeff: "1/(2*n+2)",
        a: 2.0,
        b: 2.0,
        h: "1/(2*s+1)",
        expected: Classification::Compact,
        about: "xⁿ ↦ x²ⁿ⁺²/(2n+2)",
    },
    CatalogEntry {
        name: "se_minus_s",
        coeff: "(n+1/2)*exp(-(n+1/2))",
        a: 1.0,
        b: 1.0,
        h: "s*exp(-s)",
        expected: Classification::Unbounded,
        about: "weight s·e^{−s}: cₙ → 0 but T is unbounded",
    },
];

pub fn entry(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    CATALOG.iter().map(|e| e.name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{affine_symbols, interpolation_consistency};

    #[test]
    fn entries_parse_and_interpolate() {
        for e in &CATALOG {
            let s = e.spec().unwrap();
            let sym = affine_symbols(&s);
            let dev = interpolation_consistency(&sym, &s, 32).unwrap();
            assert!(dev < 1e-12, "{}: {dev}", e.name);
        }
    }

    #[test]
    fn lookup() {
        assert_eq!(entry("t3").unwrap().b, 2.0);
        assert!(entry("nope").is_none());
        assert_eq!(names().count(), 7);
    }
}

//! Comparison of a construction's exact size with the asymptotic and finite-`i`
//! targets for the same poset and `n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::config::Limits;
use crate::embedding::{minimal_closure, ClosureCertificate, Mode};
use crate::error::Result;
use crate::io::{big, CertificateJson, LayerJson};
use crate::numbers::{format_significant, middle_binomial, BigNat};
use crate::packing::{build_plan, count_copies, PackingPlan};
use crate::poset::Poset;

/// An exact ratio together with a 6-significant-digit rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioJson {
    pub fraction: String,
    pub decimal: String,
}

impl From<&BigRational> for RatioJson {
    fn from(r: &BigRational) -> Self {
        RatioJson {
            fraction: if r.denom().is_one() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            },
            decimal: format_significant(r, 6),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub certificate: ClosureCertificate,
    pub plan: PackingPlan,
    pub copies: BigNat,
    pub family_size: BigNat,
    pub middle: BigNat,
    /// `(|P| / m) · C(n, ⌊n/2⌋)`.
    pub asymptotic_target: BigRational,
    /// `|P| · Σ_{j<i} (2^k - m)^j / (2^k)^(j+1) · C(n, ⌊n/2⌋)`.
    pub partial_target: BigRational,
}

fn rational(n: &BigNat) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// The finite-`i` target for closure size `m` inside `B_k`.
pub fn partial_sum_target(
    poset_size: usize,
    k: usize,
    m: usize,
    iterations: usize,
    middle: &BigNat,
) -> BigRational {
    let cube = BigInt::one() << k;
    let rest = &cube - BigInt::from(m);
    let mut sum = BigRational::zero();
    let mut num = BigInt::one();
    let mut den = cube.clone();
    for _ in 0..iterations {
        sum += BigRational::new(num.clone(), den.clone());
        num *= &rest;
        den *= &cube;
    }
    sum * BigRational::from_integer(BigInt::from(poset_size)) * rational(middle)
}

impl Report {
    pub fn asymptotic_ratio(&self) -> BigRational {
        rational(&self.family_size) / &self.asymptotic_target
    }

    pub fn partial_ratio(&self) -> BigRational {
        rational(&self.family_size) / &self.partial_target
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mode": self.certificate.mode.name(),
            "poset_size": self.plan.embedding.poset().size(),
            "n": self.plan.n,
            "iterations": self.plan.iterations,
            "certificate": CertificateJson::from(&self.certificate),
            "layers": self.plan.layers.iter().map(LayerJson::from).collect::<Vec<_>>(),
            "copies": big(&self.copies),
            "family_size": big(&self.family_size),
            "middle_binomial": big(&self.middle),
            "asymptotic_target": RatioJson::from(&self.asymptotic_target),
            "partial_target": RatioJson::from(&self.partial_target),
            "asymptotic_ratio": RatioJson::from(&self.asymptotic_ratio()),
            "partial_ratio": RatioJson::from(&self.partial_ratio()),
        })
    }
}

/// Runs the closure search, builds the `iterations`-deep plan at `n`, and
/// compares its exact size with both targets.
pub fn report(
    poset: &Poset,
    n: usize,
    iterations: usize,
    mode: Mode,
    k_max: Option<usize>,
    limits: &Limits,
) -> Result<Report> {
    let certificate = minimal_closure(poset, mode, k_max, limits)?;
    let plan = build_plan(&certificate.witness, n, iterations, limits)?;
    let (copies, family_size) = count_copies(&plan);
    let middle = middle_binomial(n as u64);
    let size = BigRational::from_integer(BigInt::from(poset.size()));
    let asymptotic_target =
        size / BigRational::from_integer(BigInt::from(certificate.m)) * rational(&middle);
    let partial_target = partial_sum_target(
        poset.size(),
        certificate.k,
        certificate.m,
        iterations,
        &middle,
    );
    Ok(Report {
        certificate,
        plan,
        copies,
        family_size,
        middle,
        asymptotic_target,
        partial_target,
    })
}

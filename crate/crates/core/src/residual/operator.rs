use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::model::{WickPolynomial, DEFAULT_MAX_DEGREE};
use crate::symbolic::{gauss_int, ParamPoly};

/// Which Wirtinger derivative a term applies to `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    /// `(∂/∂α*)^r`
    AlphaConj,
    /// `(∂/∂α)^r`
    Alpha,
}

/// One term `c(α*, α) · (∂_target)^r`. `coeff` already contains the
/// explicit `ħ^hbar_power` together with `±i/r!`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTerm {
    pub r: u32,
    pub target: Target,
    pub hbar_power: u32,
    pub coeff: WickPolynomial,
}

/// `∂f/∂t = Σ_terms c(α*, α) (∂_target)^r f`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvolutionOperator {
    terms: BTreeMap<(Target, u32), WickPolynomial>,
}

impl EvolutionOperator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coeff · (∂_target)^r`; zero coefficient tables are dropped.
    pub fn add_term(&mut self, target: Target, r: u32, coeff: WickPolynomial) -> &mut Self {
        let entry = self.terms.entry((target, r)).or_default();
        *entry = &*entry + &coeff;
        if entry.terms().next().is_none() {
            self.terms.remove(&(target, r));
        }
        self
    }

    pub fn with_term(mut self, target: Target, r: u32, coeff: WickPolynomial) -> Self {
        self.add_term(target, r, coeff);
        self
    }

    pub fn coeff(&self, target: Target, r: u32) -> Option<&WickPolynomial> {
        self.terms.get(&(target, r))
    }

    pub fn terms(&self) -> impl Iterator<Item = OperatorTerm> + '_ {
        self.terms.iter().map(|(&(target, r), c)| OperatorTerm {
            r,
            target,
            hbar_power: r - 1,
            coeff: c.clone(),
        })
    }

    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(|(_, r)| *r).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl std::ops::Add for &EvolutionOperator {
    type Output = EvolutionOperator;

    fn add(self, rhs: &EvolutionOperator) -> EvolutionOperator {
        let mut out = self.clone();
        for (&(target, r), c) in &rhs.terms {
            out.add_term(target, r, c.clone());
        }
        out
    }
}

impl fmt::Display for EvolutionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((target, r), c) in &self.terms {
            let d = match target {
                Target::AlphaConj => "d/da*",
                Target::Alpha => "d/da",
            };
            write!(f, "({d})^{r}:")?;
            for (&(l, s), p) in c.terms() {
                write!(f, " [{p}] a*^{l} a^{s};")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn falling(n: u32, r: u32) -> i64 {
    (0..r).map(|k| (n - k) as i64).product()
}

/// `(∂/∂α)^r` of a symbol, exactly.
pub fn d_alpha(symbol: &WickPolynomial, r: u32) -> WickPolynomial {
    let mut out = WickPolynomial::new();
    for (&(l, s), c) in symbol.terms() {
        if s >= r {
            out.add_term(l, s - r, c.scale_int(falling(s, r)));
        }
    }
    out
}

/// `(∂/∂α*)^r` of a symbol, exactly.
pub fn d_alpha_conj(symbol: &WickPolynomial, r: u32) -> WickPolynomial {
    let mut out = WickPolynomial::new();
    for (&(l, s), c) in symbol.terms() {
        if l >= r {
            out.add_term(l - r, s, c.scale_int(falling(l, r)));
        }
    }
    out
}

fn scale_symbol(symbol: &WickPolynomial, k: &ParamPoly) -> WickPolynomial {
    let mut out = WickPolynomial::new();
    for (&(l, s), c) in symbol.terms() {
        out.add_term(l, s, c * k);
    }
    out
}

fn factorial(r: u32) -> i64 {
    (1..=r as i64).product()
}

fn build(symbol: &WickPolynomial, orders: impl Iterator<Item = u32>) -> EvolutionOperator {
    let mut op = EvolutionOperator::new();
    for r in orders {
        // (i/ħ)(1/r!) ħ^r = i ħ^{r-1} / r!
        let k = (&ParamPoly::constant(gauss_int(0, 1)) * &ParamPoly::hbar_pow(r - 1)).scale_ratio(1, factorial(r));
        op.add_term(Target::AlphaConj, r, scale_symbol(&d_alpha(symbol, r), &k));
        op.add_term(Target::Alpha, r, scale_symbol(&d_alpha_conj(symbol, r), &(-&k)));
    }
    op
}

/// Evolution operator of the averages for the Wick symbol `symbol`:
/// `(i/ħ) Σ_r (1/r!) [(∂_α)^r 𝓗 (ħ∂_{α*})^r − (∂_{α*})^r 𝓗 (ħ∂_α)^r]`.
///
/// Coefficients stay exact polynomials in `(ω, μ, ħ)`; numeric parameters
/// enter only when the operator is applied.
pub fn generate_operator(symbol: &WickPolynomial) -> Result<EvolutionOperator> {
    generate_operator_capped(symbol, DEFAULT_MAX_DEGREE)
}

pub fn generate_operator_capped(symbol: &WickPolynomial, max_degree: u32) -> Result<EvolutionOperator> {
    symbol.check(max_degree)?;
    Ok(build(symbol, 1..=symbol.degree()))
}

/// The first-order part `i(∂_α𝓗 ∂_{α*} − ∂_{α*}𝓗 ∂_α)`.
pub fn liouville_operator(symbol: &WickPolynomial) -> Result<EvolutionOperator> {
    symbol.check(DEFAULT_MAX_DEGREE)?;
    Ok(build(symbol, 1..=1.min(symbol.degree())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::symbolic::ParamPoly as P;
    use proptest::prelude::*;

    fn i() -> P {
        P::i()
    }

    fn w() -> P {
        P::omega()
    }

    fn mu() -> P {
        P::mu()
    }

    fn h(k: u32) -> P {
        P::hbar_pow(k)
    }

    fn times(a: &P, b: &P) -> P {
        a * b
    }

    /// Hand transcription of the published operator for
    /// `iω(α*² − α²) + μ(α*² − α²)² − 4μħ|α|² − 2μħ²`.
    fn hyperbolic_table() -> EvolutionOperator {
        let im = i();
        // i[−2iωα − 4μ(α*² − α²)α − 4μħα*] ∂_{α*}
        let first_star = WickPolynomial::new()
            .with_term(0, 1, times(&im, &times(&im, &w())).scale_int(-2))
            .with_term(2, 1, times(&im, &mu()).scale_int(-4))
            .with_term(0, 3, times(&im, &mu()).scale_int(4))
            .with_term(1, 0, times(&im, &times(&mu(), &h(1))).scale_int(-4));
        // −i[2iωα* + 4μ(α*² − α²)α* − 4μħα] ∂_α
        let first = WickPolynomial::new()
            .with_term(1, 0, times(&im, &times(&im, &w())).scale_int(-2))
            .with_term(3, 0, times(&im, &mu()).scale_int(-4))
            .with_term(1, 2, times(&im, &mu()).scale_int(4))
            .with_term(0, 1, times(&im, &times(&mu(), &h(1))).scale_int(4));
        // iħ[−iω − 2μ(α*² − 3α²)] ∂²_{α*}
        let second_star = WickPolynomial::new()
            .with_term(0, 0, times(&times(&im, &h(1)), &times(&im, &w())).scale_int(-1))
            .with_term(2, 0, times(&times(&im, &h(1)), &mu()).scale_int(-2))
            .with_term(0, 2, times(&times(&im, &h(1)), &mu()).scale_int(6));
        // −iħ[iω + 2μ(3α*² − α²)] ∂²_α
        let second = WickPolynomial::new()
            .with_term(0, 0, times(&times(&im, &h(1)), &times(&im, &w())).scale_int(-1))
            .with_term(2, 0, times(&times(&im, &h(1)), &mu()).scale_int(-6))
            .with_term(0, 2, times(&times(&im, &h(1)), &mu()).scale_int(2));
        // ±4iħ²μ α / α* third derivatives, ±iħ³μ fourth derivatives
        let third_star = WickPolynomial::new().with_term(0, 1, times(&im, &times(&h(2), &mu())).scale_int(4));
        let third = WickPolynomial::new().with_term(1, 0, times(&im, &times(&h(2), &mu())).scale_int(-4));
        let fourth_star = WickPolynomial::new().with_term(0, 0, times(&im, &times(&h(3), &mu())));
        let fourth = WickPolynomial::new().with_term(0, 0, times(&im, &times(&h(3), &mu())).scale_int(-1));
        EvolutionOperator::new()
            .with_term(Target::AlphaConj, 1, first_star)
            .with_term(Target::Alpha, 1, first)
            .with_term(Target::AlphaConj, 2, second_star)
            .with_term(Target::Alpha, 2, second)
            .with_term(Target::AlphaConj, 3, third_star)
            .with_term(Target::Alpha, 3, third)
            .with_term(Target::AlphaConj, 4, fourth_star)
            .with_term(Target::Alpha, 4, fourth)
    }

    /// Hand transcription for `ω|α|² + μ|α|⁴`: drift
    /// `i(ω + 2μ|α|²)(α*∂_{α*} − α∂_α)` and diffusion `iμħ(α*²∂²_{α*} − α²∂²_α)`.
    fn elliptic_table() -> EvolutionOperator {
        let im = i();
        let drift = |sign: i64, l: u32, s: u32| {
            WickPolynomial::new()
                .with_term(l, s, times(&im, &w()).scale_int(sign))
                .with_term(l + 1, s + 1, times(&im, &mu()).scale_int(2 * sign))
        };
        EvolutionOperator::new()
            .with_term(Target::AlphaConj, 1, drift(1, 1, 0))
            .with_term(Target::Alpha, 1, drift(-1, 0, 1))
            .with_term(
                Target::AlphaConj,
                2,
                WickPolynomial::new().with_term(2, 0, times(&im, &times(&mu(), &h(1)))),
            )
            .with_term(
                Target::Alpha,
                2,
                WickPolynomial::new().with_term(0, 2, times(&im, &times(&mu(), &h(1))).scale_int(-1)),
            )
    }

    #[test]
    fn hyperbolic_operator_matches_transcription() {
        let op = generate_operator(&WickPolynomial::hyperbolic()).unwrap();
        let table = hyperbolic_table();
        assert_eq!(op.len(), 8);
        for t in table.terms() {
            assert_eq!(op.coeff(t.target, t.r), Some(&t.coeff), "order {} {:?}", t.r, t.target);
        }
        assert_eq!(op, table);
    }

    #[test]
    fn elliptic_operator_matches_transcription() {
        let op = generate_operator(&WickPolynomial::elliptic()).unwrap();
        assert_eq!(op, elliptic_table());
    }

    #[test]
    fn harmonic_has_only_first_order() {
        let op = generate_operator(&WickPolynomial::harmonic()).unwrap();
        let want = EvolutionOperator::new()
            .with_term(Target::AlphaConj, 1, WickPolynomial::new().with_term(1, 0, &i() * &w()))
            .with_term(Target::Alpha, 1, WickPolynomial::new().with_term(0, 1, (&i() * &w()).scale_int(-1)));
        assert_eq!(op, want);
        assert_eq!(op, liouville_operator(&WickPolynomial::harmonic()).unwrap());
    }

    #[test]
    fn liouville_keeps_first_order_only() {
        let op = liouville_operator(&WickPolynomial::hyperbolic()).unwrap();
        assert_eq!(op.max_order(), 1);
        let full = generate_operator(&WickPolynomial::hyperbolic()).unwrap();
        assert_eq!(op.coeff(Target::Alpha, 1), full.coeff(Target::Alpha, 1));
    }

    #[test]
    fn rejects_degree_and_asymmetry() {
        let big = WickPolynomial::new().with_term(5, 5, P::one());
        assert!(matches!(generate_operator(&big), Err(Error::Degree { degree: 10, cap: 8 })));
        let skew = WickPolynomial::new().with_term(2, 0, P::one());
        assert!(generate_operator(&skew).is_err());
    }

    fn symbol_strategy() -> impl Strategy<Value = WickPolynomial> {
        proptest::collection::vec((0u32..4, 0u32..4, -5i64..5, -5i64..5, 0u32..3), 0..5).prop_map(|entries| {
            let mut s = WickPolynomial::new();
            for (l, k, re, im, hp) in entries {
                let c = (&P::constant(gauss_int(re, im)) * &P::hbar_pow(hp)).clone();
                s.add_term(l, k, c.clone());
                if l != k {
                    s.add_term(k, l, c.conj());
                } else {
                    s.add_term(l, l, c.conj());
                }
            }
            s
        })
    }

    proptest! {
        #[test]
        fn generation_is_linear(a in symbol_strategy(), b in symbol_strategy()) {
            let sum = generate_operator(&(&a + &b)).unwrap();
            let parts = &generate_operator(&a).unwrap() + &generate_operator(&b).unwrap();
            prop_assert_eq!(sum, parts);
        }
    }
}

//! Central-limit moment tables, computed exactly through cumulant scaling:
//! cumulants of independent sums add, and normalizing the sum of `N` copies
//! rescales the order-`k` cumulant by `N^(1 - k/2)` while the mean stays.

use serde::Serialize;

use crate::algebra::Rat;
use crate::error::{Error, Result};
use crate::families::FamilyId;
use crate::weights::WeightId;

use super::functional::MomentSource;
use super::transform::CumulantSolver;
use super::word::Word;

/// Which independence drives the limit theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CltKind {
    Boolean,
    FermiBoolean,
}

impl CltKind {
    pub fn weight(self) -> WeightId {
        match self {
            CltKind::Boolean => WeightId::Indicator(FamilyId::Interval),
            CltKind::FermiBoolean => WeightId::Indicator(FamilyId::AlmostInterval),
        }
    }
}

impl std::str::FromStr for CltKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "boolean" => Ok(CltKind::Boolean),
            "fermi-boolean" | "fermi" => Ok(CltKind::FermiBoolean),
            other => Err(Error::InvalidInput(format!("unknown CLT kind {other:?}"))),
        }
    }
}

fn integer_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt() as u64;
    (r.saturating_sub(2)..=r + 2).find(|&c| c * c == n)
}

/// Moments of the normalized sum of `n_copies` independent copies of the
/// marginal, orders `1..=max_order`. The marginal must live on one symbol.
///
/// The normalized sum keeps its mean and scales the order-`k` cumulant by
/// `N^(1 - k/2)` for `k >= 2`. Each moment is assembled partition by
/// partition so the half-powers of `N` combine exactly: a moment whose
/// surviving terms carry integer powers is rational as it stands, and a
/// genuine `sqrt(N)` residue demands a square `N`.
///
/// Boolean kind expects a centered marginal unless `allow_non_centered`;
/// fermi-boolean sums keep their mean (constants are independent there, so
/// the non-centered limit makes sense).
pub fn clt_moments(
    kind: CltKind,
    marginal: &dyn MomentSource<Rat>,
    n_copies: u64,
    max_order: usize,
    allow_non_centered: bool,
    cap: usize,
) -> Result<Vec<Rat>> {
    if marginal.alphabet().len() != 1 {
        return Err(Error::InvalidInput(
            "the CLT marginal must live on a single symbol".into(),
        ));
    }
    if n_copies == 0 {
        return Err(Error::InvalidInput("need at least one copy".into()));
    }
    let symbol = marginal.alphabet()[0];
    let weight = kind.weight();
    let family = weight.summation_family();
    let mut solver = CumulantSolver::new(&weight, marginal, cap);
    let mut kappa: Vec<Rat> = Vec::with_capacity(max_order);
    for k in 1..=max_order {
        kappa.push(solver.top_cumulant(&Word::power(symbol, k))?);
    }
    if kind == CltKind::Boolean && !kappa[0].is_zero() && !allow_non_centered {
        return Err(Error::NonCenteredMarginal {
            mean: kappa[0].to_string(),
        });
    }

    let n_rat = Rat::from_int(n_copies as i64);
    let root = integer_sqrt(n_copies);
    let mut moments = Vec::with_capacity(max_order);
    for k in 1..=max_order {
        let mut whole = Rat::zero();
        let mut half = Rat::zero(); // coefficient of sqrt(N)
        for pi in crate::families::enumerate(family, k, cap)?.iter() {
            let w = weight.eval(pi);
            if w.is_zero() {
                continue;
            }
            let mut coeff = w;
            let mut half_exponent: i64 = 0;
            for block in pi.blocks() {
                let j = block.len();
                let kap = &kappa[j - 1];
                if kap.is_zero() {
                    coeff = Rat::zero();
                    break;
                }
                coeff = &coeff * kap;
                if j >= 2 {
                    half_exponent += 2 - j as i64;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            let coeff = &coeff * &n_rat.powi(half_exponent.div_euclid(2));
            if half_exponent.rem_euclid(2) == 0 {
                whole += &coeff;
            } else {
                half += &coeff;
            }
        }
        let value = if half.is_zero() {
            whole
        } else {
            match root {
                Some(m) => &whole + &(&half * &Rat::from_int(m as i64)),
                None => {
                    return Err(Error::NonSquareSampleCount {
                        order: k,
                        n: n_copies,
                    })
                }
            }
        };
        moments.push(value);
    }
    Ok(moments)
}

/// Moments of a two-atom law: the independent oracle for Bernoulli-type
/// limit distributions.
pub fn two_atom_moments(
    atom_a: &Rat,
    weight_a: &Rat,
    atom_b: &Rat,
    weight_b: &Rat,
    max_order: usize,
) -> Vec<Rat> {
    (1..=max_order as i64)
        .map(|k| &(weight_a * &atom_a.powi(k)) + &(weight_b * &atom_b.powi(k)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cumulants::functional::TableFunctional;
    use crate::families::DEFAULT_ENUMERATION_CAP as CAP;

    /// Centered symmetric marginal with unit variance and nontrivial higher
    /// even moments.
    fn centered_marginal() -> TableFunctional<Rat> {
        let mut f = TableFunctional::new(vec!['x'], Rat::one());
        let values = [
            Rat::zero(),
            Rat::one(),
            Rat::zero(),
            Rat::from_int(2),
            Rat::zero(),
            Rat::from_int(3),
            Rat::zero(),
            Rat::from_int(5),
        ];
        for (i, v) in values.iter().enumerate() {
            f.set(&Word::power('x', i + 1), v.clone()).unwrap();
        }
        f
    }

    #[test]
    fn boolean_fourth_moment_formula() {
        // m_4 of the normalized sum is 1 + b_4 / N for centered variance-one
        // marginals: only the pair partition and the full block survive
        let marginal = centered_marginal();
        let weight = CltKind::Boolean.weight();
        let mut solver = CumulantSolver::new(&weight, &marginal, CAP);
        let b4 = solver.top_cumulant(&Word::power('x', 4)).unwrap();
        for n in [1u64, 4, 10, 100] {
            let moments = clt_moments(CltKind::Boolean, &marginal, n, 4, false, CAP).unwrap();
            let expected = &Rat::one() + &(&b4 * &Rat::new(1, n as i64));
            assert_eq!(moments[3], expected, "N={n}");
        }
    }

    #[test]
    fn boolean_even_moments_approach_the_bernoulli_values() {
        let marginal = centered_marginal();
        let mut previous: Option<Vec<Rat>> = None;
        for n in [10u64, 100, 10_000, 1_000_000] {
            let moments = clt_moments(CltKind::Boolean, &marginal, n, 8, false, CAP).unwrap();
            let gaps: Vec<Rat> = (1..=4)
                .map(|k| (&moments[2 * k - 1] - &Rat::one()).abs())
                .collect();
            if let Some(prev) = previous {
                for (k, gap) in gaps.iter().enumerate() {
                    let improving = gap < &prev[k] || (gap.is_zero() && prev[k].is_zero());
                    assert!(improving, "even moment {} not improving", 2 * (k + 1));
                }
            }
            previous = Some(gaps);
        }
    }

    #[test]
    fn non_centered_boolean_marginal_is_rejected_without_the_flag() {
        let mut f = TableFunctional::new(vec!['x'], Rat::one());
        for k in 1..=4usize {
            f.set(&Word::power('x', k), Rat::one()).unwrap();
        }
        assert!(matches!(
            clt_moments(CltKind::Boolean, &f, 100, 4, false, CAP),
            Err(Error::NonCenteredMarginal { .. })
        ));
        assert!(clt_moments(CltKind::Boolean, &f, 100, 4, true, CAP).is_ok());
    }

    #[test]
    fn odd_orders_need_square_sample_counts() {
        // moments 1, 2, 6 give a nonzero third cumulant, whose normalization
        // carries a genuine sqrt(N)
        let mut f = TableFunctional::new(vec!['x'], Rat::one());
        for (k, m) in [(1usize, 1i64), (2, 2), (3, 6)] {
            f.set(&Word::power('x', k), Rat::from_int(m)).unwrap();
        }
        let err = clt_moments(CltKind::FermiBoolean, &f, 10, 3, true, CAP);
        assert!(matches!(err, Err(Error::NonSquareSampleCount { .. })));
        assert!(clt_moments(CltKind::FermiBoolean, &f, 16, 3, true, CAP).is_ok());
    }

    #[test]
    fn fermi_boolean_limit_is_the_shifted_bernoulli_law() {
        // marginal = Bernoulli(1/2) on atoms {0, 1}: mean 1/2, variance 1/4;
        // the limit law has atoms mean +- sqrt(variance) = {0, 1} again
        let mut f = TableFunctional::new(vec!['x'], Rat::one());
        for k in 1..=6usize {
            f.set(&Word::power('x', k), Rat::new(1, 2)).unwrap();
        }
        let half = Rat::new(1, 2);
        let limit = two_atom_moments(&Rat::zero(), &half, &Rat::one(), &half, 6);
        for n in [100u64, 10_000, 1_000_000] {
            let moments = clt_moments(CltKind::FermiBoolean, &f, n, 6, true, CAP).unwrap();
            let tolerance = Rat::new(1, n as i64);
            for k in 0..6 {
                let gap = (&moments[k] - &limit[k]).abs();
                assert!(
                    gap <= tolerance,
                    "order {} at N={n}: |{} - {}| > 1/N",
                    k + 1,
                    moments[k],
                    limit[k]
                );
            }
        }
    }
}

//! Kodaira fiber types and their combinatorics: component counts, Euler
//! numbers, associated root-lattice blocks, quadratic base change and
//! configuration-level validation.

use crate::error::{Error, Result};
use crate::lattice::LatticeBlock;
use std::fmt;
use std::str::FromStr;

/// A Kodaira fiber type. `I(0)` is the smooth fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberType {
    I(usize),
    IStar(usize),
    II,
    III,
    IV,
    IIStar,
    IIIStar,
    IVStar,
}

use FiberType::*;

impl FiberType {
    /// Number of irreducible components m_v.
    pub fn component_count(&self) -> usize {
        match self {
            I(0) => 1,
            I(n) => *n,
            IStar(n) => n + 5,
            II => 1,
            III => 2,
            IV => 3,
            IVStar => 7,
            IIIStar => 8,
            IIStar => 9,
        }
    }

    /// Euler number e(F_v): 0 for smooth, m_v for multiplicative fibers,
    /// m_v + 1 otherwise.
    pub fn euler_number(&self) -> usize {
        match self {
            I(0) => 0,
            I(n) => *n,
            _ => self.component_count() + 1,
        }
    }

    pub fn is_reducible(&self) -> bool {
        self.component_count() >= 2
    }

    /// Nonreduced fibers are exactly the starred types.
    pub fn is_nonreduced(&self) -> bool {
        matches!(self, IStar(_) | IIStar | IIIStar | IVStar)
    }

    pub fn is_reduced(&self) -> bool {
        !self.is_nonreduced()
    }

    /// The root-lattice block T_v spanned by the non-neutral components;
    /// `None` for irreducible fibers.
    pub fn t_lattice(&self) -> Option<LatticeBlock> {
        match self {
            I(n) if *n >= 2 => Some(LatticeBlock::A(n - 1)),
            IStar(n) => Some(LatticeBlock::D(n + 4)),
            III => Some(LatticeBlock::A(1)),
            IV => Some(LatticeBlock::A(2)),
            IVStar => Some(LatticeBlock::E(6)),
            IIIStar => Some(LatticeBlock::E(7)),
            IIStar => Some(LatticeBlock::E(8)),
            _ => None,
        }
    }

    /// Fiber type above a branch point of a quadratic base change.
    pub fn quadratic_base_change(&self) -> FiberType {
        match self {
            I(n) => I(2 * n),
            IStar(n) => I(2 * n),
            II => IV,
            IIStar => IVStar,
            III => IStar(0),
            IIIStar => IStar(0),
            IV => IVStar,
            IVStar => IV,
        }
    }

    /// Component multiplicities indexed by the i-index convention of the
    /// component tables. For `I*_n` the indices do not follow the D_{n+4}
    /// Dynkin order: Theta_0, Theta_1 are the near simple components,
    /// Theta_2, Theta_3 the far ones, and Theta_4.. the multiplicity-2 chain.
    pub fn component_multiplicities(&self) -> Vec<usize> {
        match self {
            I(0) | II => vec![1],
            I(n) => vec![1; *n],
            III => vec![1, 1],
            IV => vec![1, 1, 1],
            IStar(n) => {
                let mut m = vec![1, 1, 1, 1];
                m.extend(std::iter::repeat_n(2, n + 1));
                m
            }
            IVStar => vec![1, 1, 1, 2, 2, 2, 3],
            IIIStar => vec![1, 1, 2, 2, 2, 3, 3, 4],
            IIStar => vec![1, 2, 2, 3, 3, 4, 4, 5, 6],
        }
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            I(n) => write!(f, "I{n}"),
            IStar(n) => write!(f, "I{n}*"),
            II => write!(f, "II"),
            III => write!(f, "III"),
            IV => write!(f, "IV"),
            IIStar => write!(f, "II*"),
            IIIStar => write!(f, "III*"),
            IVStar => write!(f, "IV*"),
        }
    }
}

impl FromStr for FiberType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "II" => return Ok(II),
            "III" => return Ok(III),
            "IV" => return Ok(IV),
            "II*" => return Ok(IIStar),
            "III*" => return Ok(IIIStar),
            "IV*" => return Ok(IVStar),
            _ => {}
        }
        if let Some(body) = s.strip_prefix('I') {
            let (digits, starred) = match body.strip_suffix('*') {
                Some(d) => (d, true),
                None => (body, false),
            };
            if let Ok(n) = digits.parse::<usize>() {
                return Ok(if starred { IStar(n) } else { I(n) });
            }
        }
        Err(Error::domain(format!("unknown fiber type {s:?}")))
    }
}

/// A multiset of fibers together with the generic Mordell-Weil rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberConfiguration {
    pub fibers: Vec<FiberType>,
    pub generic_rank: Option<u8>,
}

impl FiberConfiguration {
    pub fn new(fibers: Vec<FiberType>, generic_rank: Option<u8>) -> Result<Self> {
        if generic_rank.is_some_and(|r| r > 8) {
            return Err(Error::domain("generic rank is at most 8"));
        }
        Ok(FiberConfiguration {
            fibers,
            generic_rank,
        })
    }

    pub fn euler_sum(&self) -> usize {
        self.fibers.iter().map(FiberType::euler_number).sum()
    }
}

/// Result of validating a configuration against rationality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub euler_sum: usize,
    /// A relatively minimal elliptic surface is rational iff e(S) = 12.
    pub passes: bool,
    pub reducible_count: usize,
    pub has_nonreduced: bool,
    pub has_i_n_ge_4: bool,
    pub has_iii_star: bool,
    pub has_ii_star: bool,
}

/// Check the Euler-number criterion and collect the flags the conic-bundle
/// admissibility tests look at.
pub fn validate_configuration(c: &FiberConfiguration) -> ValidationReport {
    let euler_sum = c.euler_sum();
    ValidationReport {
        euler_sum,
        passes: euler_sum == 12,
        reducible_count: c.fibers.iter().filter(|f| f.is_reducible()).count(),
        has_nonreduced: c.fibers.iter().any(FiberType::is_nonreduced),
        has_i_n_ge_4: c.fibers.iter().any(|f| matches!(f, I(n) if *n >= 4)),
        has_iii_star: c.fibers.contains(&IIIStar),
        has_ii_star: c.fibers.contains(&IIStar),
    }
}

/// Euler number of the quadratic base change ramified at the nonreduced
/// fiber `ramified_at` and at `other_branch`: the fiber above the nonreduced
/// branch contributes 2e(F) - 12, every other fiber class doubles.
pub fn rnrf_base_change_euler(
    c: &FiberConfiguration,
    ramified_at: FiberType,
    other_branch: FiberType,
) -> Result<usize> {
    if ramified_at.is_reduced() {
        return Err(Error::domain("base-change branch fiber must be nonreduced"));
    }
    let pos = c
        .fibers
        .iter()
        .position(|f| *f == ramified_at)
        .ok_or_else(|| Error::domain("ramified fiber not in configuration"))?;
    if !c.fibers.contains(&other_branch) {
        return Err(Error::domain("other branch fiber not in configuration"));
    }
    if other_branch.is_nonreduced() && other_branch != ramified_at {
        return Err(Error::domain("second branch fiber must be reduced"));
    }
    let mut total = 2 * ramified_at.euler_number() - 12;
    for (i, f) in c.fibers.iter().enumerate() {
        if i == pos {
            continue;
        }
        total += 2 * f.euler_number();
    }
    Ok(total)
}

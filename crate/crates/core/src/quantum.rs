//! Quantum-number types shared by every other module.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which root of the coupling function is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchSign {
    /// Minus root; reproduces the Sommerfeld / Dirac spectra.
    #[default]
    Sommerfeld,
    /// Plus root; the anomalous deep-binding solution.
    Hydrino,
}

impl BranchSign {
    /// +1 for the hydrino root, -1 for the Sommerfeld root.
    pub fn sign(self) -> f64 {
        match self {
            BranchSign::Sommerfeld => -1.0,
            BranchSign::Hydrino => 1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            BranchSign::Sommerfeld => BranchSign::Hydrino,
            BranchSign::Hydrino => BranchSign::Sommerfeld,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BranchSign::Sommerfeld => "sommerfeld",
            BranchSign::Hydrino => "hydrino",
        }
    }
}

impl fmt::Display for BranchSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The epsilon index: 0 for the spinless equation, 1 for the
/// spin-corrected one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinMode {
    #[serde(rename = "kg0")]
    Spinless,
    #[serde(rename = "kg1")]
    SpinHalf,
}

impl SpinMode {
    pub fn from_epsilon(epsilon: u8) -> Result<Self> {
        match epsilon {
            0 => Ok(SpinMode::Spinless),
            1 => Ok(SpinMode::SpinHalf),
            other => Err(Error::QuantumNumbers(format!(
                "spin mode epsilon must be 0 or 1, got {other}"
            ))),
        }
    }

    pub fn epsilon(self) -> u8 {
        match self {
            SpinMode::Spinless => 0,
            SpinMode::SpinHalf => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpinMode::Spinless => "kg0",
            SpinMode::SpinHalf => "kg1",
        }
    }

    pub fn check_angular(self, angular: i32) -> Result<()> {
        match self {
            SpinMode::Spinless if angular < 0 => Err(Error::QuantumNumbers(format!(
                "orbital l must be >= 0, got {angular}"
            ))),
            SpinMode::SpinHalf if angular == 0 => {
                Err(Error::QuantumNumbers("kappa must be nonzero".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SpinMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Whether spin-corrected states with kappa > 0 and no radial nodes are
/// admitted. The Dirac spectrum has no such states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Validity {
    #[default]
    Strict,
    Permissive,
}

/// A half-integer stored as twice its value, so j = 3/2 is `HalfInteger(3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger(i32);

impl HalfInteger {
    pub fn from_doubled(doubled: i32) -> Self {
        Self(doubled)
    }

    /// Parse "1/2", "3/2", "2" or "0.5".
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::QuantumNumbers(format!("`{text}` is not a half-integer"));
        let text = text.trim();
        if let Some((num, den)) = text.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => Ok(Self(num)),
                "1" => Ok(Self(2 * num)),
                _ => Err(bad()),
            }
        } else if let Ok(whole) = text.parse::<i32>() {
            Ok(Self(2 * whole))
        } else {
            let value: f64 = text.parse().map_err(|_| bad())?;
            let doubled = 2.0 * value;
            if doubled.fract() != 0.0 || doubled.abs() > i32::MAX as f64 {
                return Err(bad());
            }
            Ok(Self(doubled as i32))
        }
    }

    pub fn doubled(self) -> i32 {
        self.0
    }

    pub fn is_half_odd(self) -> bool {
        self.0 % 2 != 0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Complete label of one eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundState {
    mode: SpinMode,
    radial_degree: u32,
    angular: i32,
    branch: BranchSign,
}

impl BoundState {
    /// Spinless state with orbital quantum number `l` and `radial_degree`
    /// nodes.
    pub fn spinless(radial_degree: u32, l: i32, branch: BranchSign) -> Result<Self> {
        Self::new(
            SpinMode::Spinless,
            radial_degree,
            l,
            branch,
            Validity::Strict,
        )
    }

    /// Spin-corrected state with Dirac quantum number `kappa`.
    pub fn spin_half(
        radial_degree: u32,
        kappa: i32,
        branch: BranchSign,
        validity: Validity,
    ) -> Result<Self> {
        Self::new(SpinMode::SpinHalf, radial_degree, kappa, branch, validity)
    }

    pub fn new(
        mode: SpinMode,
        radial_degree: u32,
        angular: i32,
        branch: BranchSign,
        validity: Validity,
    ) -> Result<Self> {
        mode.check_angular(angular)?;
        if mode == SpinMode::SpinHalf
            && validity == Validity::Strict
            && radial_degree == 0
            && angular > 0
        {
            return Err(Error::QuantumNumbers(format!(
                "kappa = {angular} > 0 requires at least one radial node under strict Dirac validity"
            )));
        }
        Ok(Self {
            mode,
            radial_degree,
            angular,
            branch,
        })
    }

    /// Spinless state from its principal quantum number.
    pub fn spinless_principal(n_principal: u32, l: i32, branch: BranchSign) -> Result<Self> {
        if l < 0 || n_principal < l as u32 + 1 {
            return Err(Error::QuantumNumbers(format!(
                "need 0 <= l < n, got n = {n_principal}, l = {l}"
            )));
        }
        Self::spinless(n_principal - l as u32 - 1, l, branch)
    }

    /// Spin-corrected state from (n, kappa); the radial degree is n - |kappa|.
    pub fn spin_half_principal(
        n_principal: u32,
        kappa: i32,
        branch: BranchSign,
        validity: Validity,
    ) -> Result<Self> {
        let abs_kappa = kappa.unsigned_abs();
        if kappa == 0 || n_principal < abs_kappa {
            return Err(Error::QuantumNumbers(format!(
                "need n >= |kappa| > 0, got n = {n_principal}, kappa = {kappa}"
            )));
        }
        Self::spin_half(n_principal - abs_kappa, kappa, branch, validity)
    }

    pub fn mode(&self) -> SpinMode {
        self.mode
    }

    pub fn radial_degree(&self) -> u32 {
        self.radial_degree
    }

    /// l for spinless states, kappa for spin-corrected ones.
    pub fn angular(&self) -> i32 {
        self.angular
    }

    pub fn branch(&self) -> BranchSign {
        self.branch
    }

    pub fn with_branch(&self, branch: BranchSign) -> Self {
        Self { branch, ..*self }
    }

    pub fn n_principal(&self) -> u32 {
        match self.mode {
            SpinMode::Spinless => self.radial_degree + self.angular as u32 + 1,
            SpinMode::SpinHalf => self.radial_degree + self.angular.unsigned_abs(),
        }
    }

    /// Total angular momentum j = |kappa| - 1/2 for spin-corrected states.
    pub fn total_angular_momentum(&self) -> Option<HalfInteger> {
        match self.mode {
            SpinMode::Spinless => None,
            SpinMode::SpinHalf => Some(HalfInteger(2 * self.angular.abs() - 1)),
        }
    }

    /// Spin-corrected state with kappa > 0 and no nodes; absent from the
    /// Dirac spectrum.
    pub fn is_non_dirac(&self) -> bool {
        self.mode == SpinMode::SpinHalf && self.radial_degree == 0 && self.angular > 0
    }
}

/// Build a spin-corrected state from (n, j, sign of kappa) with
/// kappa = sign (j + 1/2) and radial degree n - j - 1/2.
pub fn map_total_angular_momentum(
    n_principal: u32,
    j: HalfInteger,
    kappa_sign: i32,
    branch: BranchSign,
    validity: Validity,
) -> Result<BoundState> {
    if !j.is_half_odd() || j.doubled() <= 0 {
        return Err(Error::QuantumNumbers(format!(
            "j must be a positive half-odd integer, got {j}"
        )));
    }
    if kappa_sign != 1 && kappa_sign != -1 {
        return Err(Error::QuantumNumbers(format!(
            "kappa sign must be +1 or -1, got {kappa_sign}"
        )));
    }
    let abs_kappa = (j.doubled() + 1) / 2;
    let radial = i64::from(n_principal) - i64::from(abs_kappa);
    if radial < 0 {
        return Err(Error::QuantumNumbers(format!(
            "j = {j} is too large for n = {n_principal}"
        )));
    }
    BoundState::spin_half(radial as u32, kappa_sign * abs_kappa, branch, validity)
}

/// Every Dirac-admissible (n, kappa) with n in `n_range`, ordered by n,
/// then j, then kappa < 0 before kappa > 0. Permissive validity adds the
/// kappa > 0, zero-node states.
pub fn spin_half_states(
    n_range: std::ops::RangeInclusive<u32>,
    branch: BranchSign,
    validity: Validity,
) -> Vec<BoundState> {
    let mut out = Vec::new();
    for n in n_range {
        for abs_kappa in 1..=n as i32 {
            for sign in [-1, 1] {
                if let Ok(state) =
                    BoundState::spin_half_principal(n, sign * abs_kappa, branch, validity)
                {
                    out.push(state);
                }
            }
        }
    }
    out
}

/// Every spinless (n, l) with n in `n_range` and 0 <= l < n.
pub fn spinless_states(
    n_range: std::ops::RangeInclusive<u32>,
    branch: BranchSign,
) -> Vec<BoundState> {
    let mut out = Vec::new();
    for n in n_range {
        for l in 0..n as i32 {
            out.push(BoundState::spinless_principal(n, l, branch).expect("l < n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn half(doubled: i32) -> HalfInteger {
        HalfInteger::from_doubled(doubled)
    }

    #[test]
    fn mapping_examples() {
        let s =
            map_total_angular_momentum(1, half(1), -1, BranchSign::Sommerfeld, Validity::Strict)
                .unwrap();
        assert_eq!((s.angular(), s.radial_degree()), (-1, 0));
        let s =
            map_total_angular_momentum(2, half(3), -1, BranchSign::Sommerfeld, Validity::Strict)
                .unwrap();
        assert_eq!((s.angular(), s.radial_degree()), (-2, 0));
        let s = map_total_angular_momentum(3, half(1), 1, BranchSign::Sommerfeld, Validity::Strict)
            .unwrap();
        assert_eq!((s.angular(), s.radial_degree()), (1, 2));
    }

    #[test]
    fn mapping_errors() {
        let strict = Validity::Strict;
        let b = BranchSign::Sommerfeld;
        // integer j
        assert!(map_total_angular_momentum(2, half(2), -1, b, strict).is_err());
        // j too large
        assert!(map_total_angular_momentum(1, half(3), -1, b, strict).is_err());
        // kappa > 0 with N = 0
        assert!(map_total_angular_momentum(1, half(1), 1, b, strict).is_err());
        let s = map_total_angular_momentum(1, half(1), 1, b, Validity::Permissive).unwrap();
        assert!(s.is_non_dirac());
    }

    #[test]
    fn radial_degree_is_n_minus_abs_kappa_by_enumeration() {
        for n in 1..=6u32 {
            for doubled_j in (1..2 * n as i32).step_by(2) {
                for sign in [-1, 1] {
                    let Ok(s) = map_total_angular_momentum(
                        n,
                        half(doubled_j),
                        sign,
                        BranchSign::Sommerfeld,
                        Validity::Permissive,
                    ) else {
                        continue;
                    };
                    assert_eq!(
                        s.radial_degree() as i64,
                        n as i64 - s.angular().abs() as i64
                    );
                    assert_eq!(s.n_principal(), n);
                    assert_eq!(s.total_angular_momentum(), Some(half(doubled_j)));
                }
            }
        }
    }

    #[test]
    fn half_integer_parsing() {
        assert_eq!(HalfInteger::parse("3/2").unwrap(), half(3));
        assert_eq!(HalfInteger::parse("0.5").unwrap(), half(1));
        assert_eq!(HalfInteger::parse("2").unwrap(), half(4));
        assert!(HalfInteger::parse("1/3").is_err());
        assert!(HalfInteger::parse("0.3").is_err());
        assert_eq!(half(5).to_string(), "5/2");
    }

    #[test]
    fn angular_domain() {
        assert!(BoundState::spinless(0, -1, BranchSign::Sommerfeld).is_err());
        assert!(BoundState::spin_half(1, 0, BranchSign::Sommerfeld, Validity::Strict).is_err());
        assert!(SpinMode::from_epsilon(2).is_err());
    }

    #[test]
    fn enumerations() {
        let states = spin_half_states(1..=3, BranchSign::Sommerfeld, Validity::Strict);
        assert_eq!(states.len(), 9);
        let permissive = spin_half_states(1..=3, BranchSign::Sommerfeld, Validity::Permissive);
        assert_eq!(permissive.len(), 12);
        assert_eq!(spinless_states(1..=3, BranchSign::Sommerfeld).len(), 6);
    }

    proptest! {
        #[test]
        fn principal_number_round_trips(n in 1u32..40, k in 1i32..40, positive in any::<bool>()) {
            prop_assume!(k as u32 <= n);
            let sign = if positive { 1 } else { -1 };
            let j = half(2 * k - 1);
            match map_total_angular_momentum(n, j, sign, BranchSign::Sommerfeld, Validity::Strict) {
                Ok(s) => {
                    prop_assert_eq!(s.n_principal(), n);
                    prop_assert_eq!(s.angular(), sign * k);
                }
                Err(_) => prop_assert!(positive && k as u32 == n),
            }
        }
    }
}

//! Vertex and edge rules: boolean combinations of linear-form conditions.

use std::fmt;

use crate::error::{Error, Result};

/// `coefficients · x + constant`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub coefficients: Vec<i64>,
    pub constant: i64,
}

impl LinearForm {
    pub fn new(coefficients: Vec<i64>, constant: i64) -> Self {
        LinearForm { coefficients, constant }
    }

    pub fn homogeneous(coefficients: Vec<i64>) -> Self {
        LinearForm { coefficients, constant: 0 }
    }

    /// The coordinate form `x_i` in dimension `dim`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut c = vec![0; dim];
        c[i] = 1;
        LinearForm::homogeneous(c)
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn eval(&self, p: &[i64]) -> i64 {
        self.coefficients.iter().zip(p).map(|(a, x)| a * x).sum::<i64>() + self.constant
    }

    /// The form `x -> self(x + t)`.
    pub fn translated(&self, t: &[i64]) -> LinearForm {
        LinearForm { coefficients: self.coefficients.clone(), constant: self.eval(t) }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coefficients.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        if self.constant != 0 {
            write!(f, " | {}", self.constant)?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    /// `form mod modulus ∈ residues`.
    CongruenceIn { form: LinearForm, modulus: i64, residues: Vec<i64> },
    /// `form ∈ values` (a finite level set).
    ValueIn { form: LinearForm, values: Vec<i64> },
    AtLeast { form: LinearForm, bound: i64 },
    AtMost { form: LinearForm, bound: i64 },
    /// `(forms(x) mod modulus) ∈ offsets`, one form per output coordinate.
    ResidueVectorIn { forms: Vec<LinearForm>, modulus: i64, offsets: Vec<Vec<i64>> },
}

impl Condition {
    pub fn congruence(form: LinearForm, modulus: i64, residues: Vec<i64>) -> Result<Self> {
        let c = Condition::CongruenceIn { form, modulus, residues };
        c.check(None)?;
        Ok(c)
    }

    fn forms(&self) -> Vec<&LinearForm> {
        match self {
            Condition::CongruenceIn { form, .. }
            | Condition::ValueIn { form, .. }
            | Condition::AtLeast { form, .. }
            | Condition::AtMost { form, .. } => vec![form],
            Condition::ResidueVectorIn { forms, .. } => forms.iter().collect(),
        }
    }

    /// Structural validation; `dim` additionally checks form lengths.
    pub fn check(&self, dim: Option<usize>) -> Result<()> {
        if let Some(d) = dim {
            for f in self.forms() {
                if f.dim() != d {
                    return Err(Error::DimensionMismatch { expected: d, got: f.dim() });
                }
            }
        }
        match self {
            Condition::CongruenceIn { modulus, residues, .. } => {
                if *modulus < 2 {
                    return Err(Error::InvalidRule(format!("modulus {modulus} < 2")));
                }
                if residues.is_empty() {
                    return Err(Error::InvalidRule("empty residue set".into()));
                }
                if let Some(r) = residues.iter().find(|r| !(0..*modulus).contains(*r)) {
                    return Err(Error::InvalidRule(format!("residue {r} outside [0, {modulus})")));
                }
            }
            Condition::ValueIn { values, .. } => {
                if values.is_empty() {
                    return Err(Error::InvalidRule("empty value set".into()));
                }
            }
            Condition::AtLeast { .. } | Condition::AtMost { .. } => {}
            Condition::ResidueVectorIn { forms, modulus, offsets } => {
                if *modulus < 2 {
                    return Err(Error::InvalidRule(format!("modulus {modulus} < 2")));
                }
                if offsets.is_empty() || forms.is_empty() {
                    return Err(Error::InvalidRule("empty residue vector condition".into()));
                }
                for o in offsets {
                    if o.len() != forms.len() {
                        return Err(Error::InvalidRule(format!(
                            "offset {o:?} has {} entries, expected {}",
                            o.len(),
                            forms.len()
                        )));
                    }
                    if o.iter().any(|r| !(0..*modulus).contains(r)) {
                        return Err(Error::InvalidRule(format!("offset {o:?} outside [0, {modulus})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, p: &[i64]) -> bool {
        match self {
            Condition::CongruenceIn { form, modulus, residues } => {
                residues.contains(&form.eval(p).rem_euclid(*modulus))
            }
            Condition::ValueIn { form, values } => values.contains(&form.eval(p)),
            Condition::AtLeast { form, bound } => form.eval(p) >= *bound,
            Condition::AtMost { form, bound } => form.eval(p) <= *bound,
            Condition::ResidueVectorIn { forms, modulus, offsets } => {
                let r: Vec<i64> = forms.iter().map(|f| f.eval(p).rem_euclid(*modulus)).collect();
                offsets.iter().any(|o| *o == r)
            }
        }
    }

    fn map_forms(&self, f: impl Fn(&LinearForm) -> LinearForm) -> Condition {
        match self {
            Condition::CongruenceIn { form, modulus, residues } => {
                Condition::CongruenceIn { form: f(form), modulus: *modulus, residues: residues.clone() }
            }
            Condition::ValueIn { form, values } => Condition::ValueIn { form: f(form), values: values.clone() },
            Condition::AtLeast { form, bound } => Condition::AtLeast { form: f(form), bound: *bound },
            Condition::AtMost { form, bound } => Condition::AtMost { form: f(form), bound: *bound },
            Condition::ResidueVectorIn { forms, modulus, offsets } => Condition::ResidueVectorIn {
                forms: forms.iter().map(&f).collect(),
                modulus: *modulus,
                offsets: offsets.clone(),
            },
        }
    }

    /// Moduli of all modular tests (used to bound periods).
    fn moduli(&self) -> Vec<i64> {
        match self {
            Condition::CongruenceIn { modulus, .. } | Condition::ResidueVectorIn { modulus, .. } => vec![*modulus],
            _ => vec![],
        }
    }

    fn is_modular(&self) -> bool {
        matches!(self, Condition::CongruenceIn { .. } | Condition::ResidueVectorIn { .. })
    }
}

/// A finite boolean tree over [`Condition`] leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleExpr {
    And(Vec<RuleExpr>),
    Or(Vec<RuleExpr>),
    Not(Box<RuleExpr>),
    Leaf(Condition),
}

impl RuleExpr {
    pub fn leaf(c: Condition) -> Self {
        RuleExpr::Leaf(c)
    }

    pub fn eval(&self, p: &[i64]) -> bool {
        match self {
            RuleExpr::And(xs) => xs.iter().all(|x| x.eval(p)),
            RuleExpr::Or(xs) => xs.iter().any(|x| x.eval(p)),
            RuleExpr::Not(x) => !x.eval(p),
            RuleExpr::Leaf(c) => c.eval(p),
        }
    }

    pub fn check(&self, dim: usize) -> Result<()> {
        match self {
            RuleExpr::And(xs) | RuleExpr::Or(xs) => xs.iter().try_for_each(|x| x.check(dim)),
            RuleExpr::Not(x) => x.check(dim),
            RuleExpr::Leaf(c) => c.check(Some(dim)),
        }
    }

    /// The rule `x -> self(x + t)`.
    pub fn translated(&self, t: &[i64]) -> RuleExpr {
        match self {
            RuleExpr::And(xs) => RuleExpr::And(xs.iter().map(|x| x.translated(t)).collect()),
            RuleExpr::Or(xs) => RuleExpr::Or(xs.iter().map(|x| x.translated(t)).collect()),
            RuleExpr::Not(x) => RuleExpr::Not(Box::new(x.translated(t))),
            RuleExpr::Leaf(c) => RuleExpr::Leaf(c.map_forms(|f| f.translated(t))),
        }
    }

    /// If every leaf is modular, the least common multiple of the moduli:
    /// the rule is then invariant under `lcm · Z^n`.
    pub fn period(&self) -> Option<i64> {
        fn walk(e: &RuleExpr, acc: &mut Vec<i64>) -> bool {
            match e {
                RuleExpr::And(xs) | RuleExpr::Or(xs) => xs.iter().all(|x| walk(x, acc)),
                RuleExpr::Not(x) => walk(x, acc),
                RuleExpr::Leaf(c) => {
                    acc.extend(c.moduli());
                    c.is_modular()
                }
            }
        }
        let mut moduli = Vec::new();
        if !walk(self, &mut moduli) {
            return None;
        }
        Some(moduli.into_iter().fold(1, num_integer::lcm))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g3() -> RuleExpr {
        RuleExpr::leaf(Condition::congruence(LinearForm::homogeneous(vec![1, 2, 3]), 7, vec![0, 1, 2, 4]).unwrap())
    }

    #[test]
    fn g3_membership() {
        assert!(g3().eval(&[0, 0, 0]));
        assert!(!g3().eval(&[3, 0, 0]));
        assert!(g3().eval(&[1, 0, 0]));
        assert_eq!(g3().period(), Some(7));
    }

    #[test]
    fn translation_shifts_constant() {
        let r = g3().translated(&[3, 0, 0]);
        for p in [[0, 0, 0], [1, 2, 3], [-4, 1, 0]] {
            let q = [p[0] + 3, p[1], p[2]];
            assert_eq!(r.eval(&p), g3().eval(&q));
        }
    }

    #[test]
    fn invalid_conditions() {
        assert!(Condition::congruence(LinearForm::homogeneous(vec![1]), 1, vec![0]).is_err());
        assert!(Condition::congruence(LinearForm::homogeneous(vec![1]), 4, vec![4]).is_err());
        assert!(Condition::congruence(LinearForm::homogeneous(vec![1]), 4, vec![]).is_err());
        let rv = Condition::ResidueVectorIn {
            forms: vec![LinearForm::coordinate(2, 0)],
            modulus: 3,
            offsets: vec![vec![0, 1]],
        };
        assert!(rv.check(Some(2)).is_err());
        assert!(g3().check(4).is_err());
    }

    #[test]
    fn half_spaces_have_no_period() {
        let f = LinearForm::homogeneous(vec![1, 3, 5]);
        let r = RuleExpr::And(vec![
            RuleExpr::leaf(Condition::AtLeast { form: f.clone(), bound: 3 }),
            RuleExpr::leaf(Condition::congruence(f, 7, vec![2, 3, 4, 6]).unwrap()),
        ]);
        assert_eq!(r.period(), None);
        assert!(r.eval(&[3, 0, 0]));
        assert!(!r.eval(&[2, 0, 0]));
        assert!(!r.eval(&[-4, 0, 0]));
    }
}

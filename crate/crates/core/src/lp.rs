//! Exact linear feasibility over the rationals.
//!
//! [`lp_feasible`] runs a phase-one simplex with Bland's rule on a dense
//! rational tableau. Every answer carries a certificate: a satisfying point,
//! or a Farkas multiplier vector proving that no point exists. Both can be
//! re-checked with a single pass over the constraints, see
//! [`LinearProgram::check`].

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{serde_rat, serde_rat_vec, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// Sign restriction of a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarKind {
    Free,
    NonNeg,
}

/// `coeffs · x  (<= | >= | =)  rhs`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    #[serde(with = "serde_rat_vec")]
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    #[serde(with = "serde_rat")]
    pub rhs: Rat,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub vars: Vec<VarKind>,
    pub constraints: Vec<Constraint>,
}

/// Result of a feasibility query.
///
/// `Infeasible(m)` holds one multiplier per constraint. Writing every
/// constraint as `a·x <= b` (a `>=` row is negated first), the multipliers
/// satisfy: `m_i >= 0` on inequality rows, `Σ m_i a_i` is zero on free
/// variables and nonnegative on sign-restricted ones, and `Σ m_i b_i = -1`.
/// For any admissible `x` that reads `0 <= (Σ m_i a_i)·x <= -1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LpOutcome {
    Feasible(#[serde(with = "serde_rat_vec")] Vec<Rat>),
    Infeasible(#[serde(with = "serde_rat_vec")] Vec<Rat>),
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

impl LinearProgram {
    pub fn new(vars: Vec<VarKind>) -> Self {
        LinearProgram {
            vars,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn push(&mut self, coeffs: Vec<Rat>, relation: Relation, rhs: Rat) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    fn validate(&self) -> Result<()> {
        let n = self.vars.len();
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::Input(format!(
                    "constraint {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    /// Exact check that `x` satisfies every constraint and sign restriction.
    pub fn is_solution(&self, x: &[Rat]) -> bool {
        if x.len() != self.vars.len() {
            return false;
        }
        let signs_ok = self
            .vars
            .iter()
            .zip(x)
            .all(|(k, v)| *k == VarKind::Free || !v.is_negative());
        signs_ok
            && self.constraints.iter().all(|c| {
                let lhs = crate::rational::dot(&c.coeffs, x);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }

    /// Exact check of a Farkas certificate in the convention of [`LpOutcome`].
    pub fn is_farkas(&self, m: &[Rat]) -> bool {
        if m.len() != self.constraints.len() {
            return false;
        }
        let n = self.vars.len();
        let mut comb = vec![Rat::zero(); n];
        let mut rhs = Rat::zero();
        for (c, mi) in self.constraints.iter().zip(m) {
            if c.coeffs.len() != n {
                return false;
            }
            let sign = match c.relation {
                Relation::Le => 1,
                Relation::Ge => -1,
                Relation::Eq => 0,
            };
            if sign != 0 && mi.is_negative() {
                return false;
            }
            if mi.is_zero() {
                continue;
            }
            let w = if sign < 0 { -mi.clone() } else { mi.clone() };
            for (acc, a) in comb.iter_mut().zip(&c.coeffs) {
                *acc += &w * a;
            }
            rhs += &w * &c.rhs;
        }
        let comb_ok = self.vars.iter().zip(&comb).all(|(k, v)| match k {
            VarKind::Free => v.is_zero(),
            VarKind::NonNeg => !v.is_negative(),
        });
        comb_ok && rhs.is_negative()
    }

    /// Re-checks an outcome against this program.
    pub fn check(&self, outcome: &LpOutcome) -> bool {
        match outcome {
            LpOutcome::Feasible(x) => self.is_solution(x),
            LpOutcome::Infeasible(m) => self.is_farkas(m),
        }
    }
}

/// Decides feasibility of `lp` exactly.
///
/// Deterministic: columns are ordered slacks, then structural variables (a
/// free variable becomes a plus/minus pair), then artificials, and Bland's
/// lowest-index rule picks both the entering and the leaving column.
pub fn lp_feasible(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    let m = lp.constraints.len();
    let n = lp.vars.len();

    // Row sign so that the right-hand side is nonnegative; Ge rows with a zero
    // right-hand side are flipped so their slack can start in the basis.
    let sigma: Vec<bool> = lp
        .constraints
        .iter()
        .map(|c| match c.relation {
            Relation::Le => c.rhs.is_negative(),
            Relation::Ge => !c.rhs.is_positive(),
            Relation::Eq => c.rhs.is_negative(),
        })
        .collect();

    let mut slack_col = vec![None; m];
    let mut ncols = 0;
    for (i, c) in lp.constraints.iter().enumerate() {
        if c.relation != Relation::Eq {
            slack_col[i] = Some(ncols);
            ncols += 1;
        }
    }
    let mut struct_col = Vec::with_capacity(n);
    for k in &lp.vars {
        struct_col.push(ncols);
        ncols += match k {
            VarKind::Free => 2,
            VarKind::NonNeg => 1,
        };
    }
    let first_artificial = ncols;

    // Which rows start with their slack in the basis.
    let mut initial_basic = vec![0usize; m];
    let mut artificial_rows = Vec::new();
    for (i, c) in lp.constraints.iter().enumerate() {
        let slack_sign_positive = match c.relation {
            Relation::Le => !sigma[i],
            Relation::Ge => sigma[i],
            Relation::Eq => false,
        };
        if c.relation != Relation::Eq && slack_sign_positive {
            initial_basic[i] = slack_col[i].unwrap();
        } else {
            initial_basic[i] = ncols;
            artificial_rows.push(i);
            ncols += 1;
        }
    }

    let mut tab = vec![vec![Rat::zero(); ncols + 1]; m];
    for (i, c) in lp.constraints.iter().enumerate() {
        let row = &mut tab[i];
        let flip = |x: Rat| if sigma[i] { -x } else { x };
        for (v, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let col = struct_col[v];
            row[col] = flip(a.clone());
            if lp.vars[v] == VarKind::Free {
                row[col + 1] = flip(-a.clone());
            }
        }
        if let Some(sc) = slack_col[i] {
            let kappa = match c.relation {
                Relation::Le => Rat::from_integer(1.into()),
                _ => Rat::from_integer((-1).into()),
            };
            row[sc] = flip(kappa);
        }
        if initial_basic[i] >= first_artificial {
            row[initial_basic[i]] = Rat::from_integer(1.into());
        }
        row[ncols] = flip(c.rhs.clone());
    }

    // Phase-one objective row: reduced costs and -w in the last slot.
    let mut obj = vec![Rat::zero(); ncols + 1];
    for &i in &artificial_rows {
        for (j, v) in tab[i].iter().enumerate() {
            if j < first_artificial || j == ncols {
                obj[j] -= v;
            }
        }
    }

    let mut basis = initial_basic.clone();
    loop {
        let Some(enter) = (0..first_artificial).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            let a = &tab[i][enter];
            if !a.is_positive() {
                continue;
            }
            let ratio = &tab[i][ncols] / a;
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below by zero, so some row always blocks.
        let (r, _) = leave.ok_or_else(|| Error::Invariant("unbounded phase-one LP".into()))?;
        pivot(&mut tab, &mut obj, r, enter);
        basis[r] = enter;
    }

    let w = -obj[ncols].clone();
    if w.is_zero() {
        let mut colval = vec![Rat::zero(); ncols];
        for (i, &b) in basis.iter().enumerate() {
            colval[b] = tab[i][ncols].clone();
        }
        let x = lp
            .vars
            .iter()
            .zip(&struct_col)
            .map(|(k, &c)| match k {
                VarKind::NonNeg => colval[c].clone(),
                VarKind::Free => &colval[c] - &colval[c + 1],
            })
            .collect();
        return Ok(LpOutcome::Feasible(x));
    }

    // Dual values y_i = c_j - d_j on each row's initial identity column.
    let mut mult = Vec::with_capacity(m);
    for (i, c) in lp.constraints.iter().enumerate() {
        let j = initial_basic[i];
        let cost = if j >= first_artificial {
            Rat::from_integer(1.into())
        } else {
            Rat::zero()
        };
        let y = cost - &obj[j];
        let u = if sigma[i] { y } else { -y };
        let mi = match c.relation {
            Relation::Ge => -u,
            _ => u,
        };
        mult.push(mi / &w);
    }
    Ok(LpOutcome::Infeasible(mult))
}

fn pivot(tab: &mut [Vec<Rat>], obj: &mut [Rat], r: usize, c: usize) {
    let piv = tab[r][c].clone();
    let nz: Vec<usize> = tab[r]
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(j, _)| j)
        .collect();
    if !piv.is_one() {
        for &j in &nz {
            tab[r][j] /= &piv;
        }
    }
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for &j in &nz {
            row[j] -= &f * &prow[j];
        }
    }
    if !obj[c].is_zero() {
        let f = obj[c].clone();
        for &j in &nz {
            obj[j] -= &f * &prow[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn one_var(cons: &[(i64, Relation, i64)]) -> LinearProgram {
        let mut lp = LinearProgram::new(vec![VarKind::Free]);
        for &(a, rel, b) in cons {
            lp.push(vec![int(a)], rel, int(b));
        }
        lp
    }

    #[test]
    fn unit_box_is_feasible_at_zero() {
        let lp = one_var(&[(1, Relation::Ge, 0), (1, Relation::Le, 1)]);
        let out = lp_feasible(&lp).unwrap();
        assert_eq!(out, LpOutcome::Feasible(vec![int(0)]));
        assert!(lp.check(&out));
    }

    #[test]
    fn crossed_bounds_give_unit_farkas() {
        let lp = one_var(&[(1, Relation::Ge, 1), (1, Relation::Le, 0)]);
        let out = lp_feasible(&lp).unwrap();
        assert_eq!(out, LpOutcome::Infeasible(vec![int(1), int(1)]));
        assert!(lp.check(&out));
    }

    #[test]
    fn equality_with_nonneg_vars() {
        // x + y = -1 with x, y >= 0
        let mut lp = LinearProgram::new(vec![VarKind::NonNeg, VarKind::NonNeg]);
        lp.push(vec![int(1), int(1)], Relation::Eq, int(-1));
        let out = lp_feasible(&lp).unwrap();
        assert!(!out.is_feasible());
        assert!(lp.check(&out));

        let mut lp = LinearProgram::new(vec![VarKind::NonNeg, VarKind::NonNeg]);
        lp.push(vec![int(1), int(2)], Relation::Eq, rat(3, 2));
        lp.push(vec![int(1), int(-1)], Relation::Ge, int(0));
        let out = lp_feasible(&lp).unwrap();
        assert!(out.is_feasible());
        assert!(lp.check(&out));
    }

    #[test]
    fn malformed_rows_rejected() {
        let mut lp = LinearProgram::new(vec![VarKind::Free; 2]);
        lp.push(vec![int(1)], Relation::Le, int(0));
        assert!(matches!(lp_feasible(&lp), Err(Error::Input(_))));
    }

    #[test]
    fn empty_program_is_feasible() {
        let lp = LinearProgram::new(vec![VarKind::Free; 3]);
        assert_eq!(
            lp_feasible(&lp).unwrap(),
            LpOutcome::Feasible(vec![int(0), int(0), int(0)])
        );
    }

    #[test]
    fn tampered_certificates_fail() {
        let lp = one_var(&[(1, Relation::Ge, 1), (1, Relation::Le, 0)]);
        assert!(!lp.is_farkas(&[int(1), int(2)]));
        assert!(!lp.is_farkas(&[int(-1), int(-1)]));
        assert!(!lp.is_solution(&[rat(1, 2)]));
    }
}

//! Rack actions on finite sets.

use std::sync::Arc;

use crate::error::{check_table, Error, Result};
use crate::group::FiniteGroup;
use crate::perm::{is_bijection, Permutation};
use crate::rack::FiniteRack;
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RackAction {
    rack: Arc<FiniteRack>,
    m: usize,
    act: Vec<usize>,
}

/// A stabilizer together with the result of its `>`-closure check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stabilizer {
    pub members: Vec<usize>,
    pub closure: Verdict,
}

impl RackAction {
    /// Validates bijective rows and `r1.(r2.x) = (r1>r2).(r1.x)`.
    pub fn from_table(rack: Arc<FiniteRack>, rows: &[Vec<usize>]) -> Result<Self> {
        let n = rack.order();
        if rows.len() != n {
            return Err(Error::Mismatch(format!("action has {} rows for a rack of order {n}", rows.len())));
        }
        let m = rows[0].len();
        check_table(rows, m, m)?;
        if let Some(row) = rows.iter().position(|r| !is_bijection(r)) {
            return Err(Error::RowNotBijective { row });
        }
        let act: Vec<usize> = rows.iter().flatten().copied().collect();
        let action = RackAction { rack, m, act };
        for r1 in 0..n {
            for r2 in 0..n {
                let r12 = action.rack.op(r1, r2);
                for x in 0..m {
                    let lhs = action.act(r1, action.act(r2, x));
                    let rhs = action.act(r12, action.act(r1, x));
                    if lhs != rhs {
                        return Err(Error::CompatibilityViolation { r1, r2, x, lhs, rhs });
                    }
                }
            }
        }
        Ok(action)
    }

    /// The rack acting on itself through its operation.
    pub fn regular(rack: Arc<FiniteRack>) -> Result<Self> {
        let rows = rack.table();
        Self::from_table(rack, &rows)
    }

    /// Every element acts by the same permutation `sigma`.
    pub fn from_permutation(rack: Arc<FiniteRack>, sigma: &Permutation) -> Result<Self> {
        let rows = vec![sigma.as_slice().to_vec(); rack.order()];
        Self::from_table(rack, &rows)
    }

    /// A group action of `g`, reinterpreted as an action of its conjugation rack.
    pub fn from_group_action(g: &FiniteGroup, rows: &[Vec<usize>]) -> Result<Self> {
        let order = g.order();
        if rows.len() != order {
            return Err(Error::Mismatch(format!("group action has {} rows for a group of order {order}", rows.len())));
        }
        let m = rows[0].len();
        check_table(rows, m, m)?;
        let e = g.identity();
        if let Some(x) = (0..m).find(|&x| rows[e][x] != x) {
            return Err(Error::NotAGroupAction { detail: format!("identity moves point {x}") });
        }
        for a in 0..order {
            for b in 0..order {
                let ab = g.mul(a, b);
                if let Some(x) = (0..m).find(|&x| rows[a][rows[b][x]] != rows[ab][x]) {
                    return Err(Error::NotAGroupAction {
                        detail: format!("a={a}, b={b}, x={x}: a.(b.x) != (ab).x"),
                    });
                }
            }
        }
        Self::from_table(Arc::new(FiniteRack::conjugation(g)?), rows)
    }

    pub fn rack(&self) -> &Arc<FiniteRack> {
        &self.rack
    }

    pub fn set_size(&self) -> usize {
        self.m
    }

    pub fn act(&self, r: usize, x: usize) -> usize {
        self.act[r * self.m + x]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.act.chunks(self.m).map(<[usize]>::to_vec).collect()
    }

    /// `{r : r.x = x}`, with its `>`-closure checked.
    pub fn stabilizer(&self, x: usize) -> Result<Stabilizer> {
        if x >= self.m {
            return Err(Error::IndexOutOfRange { index: x as u128, bound: self.m as u128 });
        }
        let members: Vec<usize> = (0..self.rack.order()).filter(|&r| self.act(r, x) == x).collect();
        let closure = Verdict::from_witness(
            "L2.14",
            format!("stabilizer of point {x}"),
            self.rack.closure_witness(&members),
        );
        Ok(Stabilizer { members, closure })
    }
}

//! Configurations `x : R -> A`, the shift action `(r.x)(s) = x(r >^-1 s)`, and
//! the little-endian base-`q` encodings used for every exhaustive scan.
//!
//! A configuration with cells `c_0 .. c_{n-1}` encodes to `sum c_s q^s`; a
//! pattern on a sorted memory set `m_0 < .. < m_{k-1}` encodes to
//! `sum p(m_i) q^i`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rack::FiniteRack;
use crate::verdict::{Verdict, Witness, WitnessKind};

/// Default cap on `q^n`, the number of configurations a scan may touch.
pub const DEFAULT_BUDGET: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_entries: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_entries: DEFAULT_BUDGET }
    }
}

impl Budget {
    pub fn new(max_entries: usize) -> Self {
        Budget { max_entries }
    }

    /// `q^n`, or `SizeLimitExceeded` if it is over budget.
    pub fn power(&self, q: usize, n: usize, what: &str) -> Result<usize> {
        let requested = (q as u128).saturating_pow(n as u32);
        if requested > self.max_entries as u128 {
            return Err(Error::SizeLimitExceeded {
                what: what.to_string(),
                requested,
                limit: self.max_entries as u128,
            });
        }
        Ok(requested as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    pub q: usize,
    pub cells: Vec<usize>,
}

impl Configuration {
    pub fn new(q: usize, cells: Vec<usize>) -> Result<Self> {
        if q == 0 {
            return Err(Error::Invalid("alphabet size must be positive".into()));
        }
        if let Some(&c) = cells.iter().find(|&&c| c >= q) {
            return Err(Error::IndexOutOfRange { index: c as u128, bound: q as u128 });
        }
        Ok(Configuration { q, cells })
    }

    pub fn constant(n: usize, q: usize, symbol: usize) -> Result<Self> {
        Self::new(q, vec![symbol; n])
    }

    /// Parses a compact digit string such as `010` (requires `q <= 10`).
    pub fn parse_digits(q: usize, digits: &str) -> Result<Self> {
        if q > 10 {
            return Err(Error::Invalid("digit strings need q <= 10".into()));
        }
        let cells = digits
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::Invalid(format!("bad digit {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(q, cells)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, s: usize) -> usize {
        self.cells[s]
    }

    pub fn digits(&self) -> String {
        self.cells.iter().map(|c| c.to_string()).collect()
    }

    pub fn encode(&self) -> Result<usize> {
        encode_config(self)
    }

    pub fn is_constant(&self) -> bool {
        self.cells.windows(2).all(|w| w[0] == w[1])
    }
}

pub fn encode_config(x: &Configuration) -> Result<usize> {
    encode_digits(&x.cells, x.q)
}

pub fn decode_config(n: usize, q: usize, index: usize) -> Result<Configuration> {
    Configuration::new(q, decode_digits(n, q, index)?)
}

/// A pattern on a sorted memory set, as an encoded index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PatternKey {
    pub memory: Vec<usize>,
    pub index: usize,
}

/// Encodes `values[i] = p(memory[i])`.
pub fn encode_pattern(memory: &[usize], values: &[usize], q: usize) -> Result<PatternKey> {
    check_memory(memory)?;
    if values.len() != memory.len() {
        return Err(Error::Mismatch(format!("{} values for a memory set of size {}", values.len(), memory.len())));
    }
    Ok(PatternKey { memory: memory.to_vec(), index: encode_digits(values, q)? })
}

pub fn decode_pattern(key: &PatternKey, q: usize) -> Result<Vec<usize>> {
    check_memory(&key.memory)?;
    decode_digits(key.memory.len(), q, key.index)
}

pub(crate) fn check_memory(memory: &[usize]) -> Result<()> {
    if memory.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid(format!("memory set {memory:?} is not strictly increasing")));
    }
    Ok(())
}

fn encode_digits(values: &[usize], q: usize) -> Result<usize> {
    let mut index: usize = 0;
    for &v in values.iter().rev() {
        if v >= q {
            return Err(Error::IndexOutOfRange { index: v as u128, bound: q as u128 });
        }
        index = index
            .checked_mul(q)
            .and_then(|i| i.checked_add(v))
            .ok_or(Error::IndexOutOfRange { index: u128::MAX, bound: usize::MAX as u128 })?;
    }
    Ok(index)
}

fn decode_digits(n: usize, q: usize, mut index: usize) -> Result<Vec<usize>> {
    let bound = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if q == 0 || index as u128 >= bound {
        return Err(Error::IndexOutOfRange { index: index as u128, bound });
    }
    let mut cells = Vec::with_capacity(n);
    for _ in 0..n {
        cells.push(index % q);
        index /= q;
    }
    Ok(cells)
}

/// `r.x`, where `(r.x)(s) = x(r >^-1 s)`.
pub fn shift(rack: &FiniteRack, r: usize, x: &Configuration) -> Result<Configuration> {
    rack.check_element(r)?;
    if x.len() != rack.order() {
        return Err(Error::Mismatch(format!("configuration has {} cells for a rack of order {}", x.len(), rack.order())));
    }
    let cells = (0..rack.order()).map(|s| x.cells[rack.inv_op(r, s)]).collect();
    Ok(Configuration { q: x.q, cells })
}

/// `y` lies in the cylinder `V(x, omega)`: it agrees with `x` on `omega`.
pub fn in_cylinder(x: &Configuration, omega: &[usize], y: &Configuration) -> bool {
    omega.iter().all(|&s| x.cells[s] == y.cells[s])
}

/// The configuration space `A^R` with every shift precomputed on encoded indices.
#[derive(Debug, Clone)]
pub struct ConfigSpace {
    rack: Arc<FiniteRack>,
    q: usize,
    size: usize,
    pow: Vec<usize>,
    shifts: Vec<Vec<usize>>,
}

impl ConfigSpace {
    pub fn new(rack: Arc<FiniteRack>, q: usize, budget: Budget) -> Result<Self> {
        if q == 0 {
            return Err(Error::Invalid("alphabet size must be positive".into()));
        }
        let n = rack.order();
        let size = budget.power(q, n, "configuration space")?;
        let pow: Vec<usize> = (0..=n).map(|i| q.pow(i as u32)).collect();
        let mut space = ConfigSpace { rack, q, size, pow, shifts: Vec::new() };
        space.shifts = (0..n)
            .map(|r| {
                (0..size)
                    .map(|x| (0..n).map(|s| space.digit(x, space.rack.inv_op(r, s)) * space.pow[s]).sum())
                    .collect()
            })
            .collect();
        Ok(space)
    }

    pub fn rack(&self) -> &Arc<FiniteRack> {
        &self.rack
    }

    pub fn n(&self) -> usize {
        self.rack.order()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of configurations, `q^n`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// `x(s)` for an encoded configuration.
    pub fn digit(&self, x: usize, s: usize) -> usize {
        x / self.pow[s] % self.q
    }

    pub fn power(&self, i: usize) -> usize {
        self.pow[i]
    }

    /// Encoded `r.x`.
    pub fn shift(&self, r: usize, x: usize) -> usize {
        self.shifts[r][x]
    }

    pub fn decode(&self, x: usize) -> Configuration {
        decode_config(self.n(), self.q, x).expect("index within space")
    }

    pub fn encode(&self, x: &Configuration) -> Result<usize> {
        if x.len() != self.n() || x.q != self.q {
            return Err(Error::Mismatch("configuration does not belong to this space".into()));
        }
        encode_config(x)
    }

    /// Encoded pattern `(r.x)|_memory`, i.e. `sum x(r >^-1 m_i) q^i`.
    pub fn shifted_pattern(&self, r: usize, x: usize, memory: &[usize]) -> usize {
        memory
            .iter()
            .enumerate()
            .map(|(i, &m)| self.digit(x, self.rack.inv_op(r, m)) * self.pow[i])
            .sum()
    }

    /// Encoded pattern `x|_memory`.
    pub fn pattern(&self, x: usize, memory: &[usize]) -> usize {
        memory.iter().enumerate().map(|(i, &m)| self.digit(x, m) * self.pow[i]).sum()
    }

    pub fn is_uniform(&self, x: usize) -> bool {
        let first = self.digit(x, 0);
        (1..self.n()).all(|s| self.digit(x, s) == first)
    }

    /// Exhaustive check that the shifts form a rack action on `A^R`.
    pub fn shift_action_check(&self) -> Verdict {
        let instance = format!("shift action, n={}, q={}", self.n(), self.q);
        Verdict::from_witness("P2.15", instance, self.shift_action_witness())
            .with_note("continuity holds by finiteness: A^R is a finite discrete space")
    }

    fn shift_action_witness(&self) -> Option<Witness> {
        let n = self.n();
        for r in 0..n {
            let mut preimage = vec![usize::MAX; self.size];
            for x in 0..self.size {
                let y = self.shift(r, x);
                if preimage[y] != usize::MAX {
                    return Some(
                        Witness::new(WitnessKind::ShiftNotInjective).elements([r]).configs([preimage[y], x]).sides([y], [y]),
                    );
                }
                preimage[y] = x;
            }
        }
        for r1 in 0..n {
            for r2 in 0..n {
                for x in 0..self.size {
                    let (lhs, rhs) = self.shift_compatibility_sides(r1, r2, x);
                    if lhs != rhs {
                        return Some(
                            Witness::new(WitnessKind::ShiftCompatibility).elements([r1, r2]).configs([x]).sides([lhs], [rhs]),
                        );
                    }
                }
            }
        }
        None
    }

    /// `(r1.(r2.x), (r1>r2).(r1.x))`, encoded.
    pub fn shift_compatibility_sides(&self, r1: usize, r2: usize, x: usize) -> (usize, usize) {
        let r12 = self.rack.op(r1, r2);
        (self.shift(r1, self.shift(r2, x)), self.shift(r12, self.shift(r1, x)))
    }

    /// Continuity of each shift at finite scale: coordinate `s` of `r.x` is
    /// exactly coordinate `r >^-1 s` of `x`.
    pub fn shift_continuity_check(&self) -> Verdict {
        let instance = format!("shift coordinates, n={}, q={}", self.n(), self.q);
        let n = self.n();
        let witness = (0..n).find_map(|r| {
            (0..n).find_map(|s| {
                (0..self.size).find_map(|x| {
                    let lhs = self.digit(self.shift(r, x), s);
                    let rhs = self.digit(x, self.rack.inv_op(r, s));
                    (lhs != rhs).then(|| {
                        Witness::new(WitnessKind::ShiftCoordinate).elements([r, s]).configs([x]).sides([lhs], [rhs])
                    })
                })
            })
        });
        Verdict::from_witness("P4.1", instance, witness)
    }

    /// `Stab(x) = {r : r.x = x}`.
    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.n()).filter(|&r| self.shift(r, x) == x).collect()
    }

    /// `{r : x(s) = x(r >^-1 s) for all s}`, computed cell by cell.
    pub fn stabilizer_by_cells(&self, x: usize) -> Vec<usize> {
        let n = self.n();
        (0..n).filter(|&r| (0..n).all(|s| self.digit(x, s) == self.digit(x, self.rack.inv_op(r, s)))).collect()
    }

    /// Both stabilizer characterizations, asserted equal, plus the `>`-closure
    /// check of the result.
    pub fn config_stabilizer(&self, x: usize) -> ConfigStabilizer {
        let members = self.stabilizer(x);
        let by_cells = self.stabilizer_by_cells(x);
        let instance = format!("stabilizer of configuration {x}");
        let agreement = if members == by_cells {
            Verdict::holds("P2.19", instance.clone())
        } else {
            let r = (0..self.n()).find(|r| members.contains(r) != by_cells.contains(r)).unwrap();
            Verdict::fails(
                "P2.19",
                instance.clone(),
                Witness::new(WitnessKind::StabilizerCharacterization)
                    .elements([r])
                    .configs([x])
                    .sides([members.contains(&r) as usize], [by_cells.contains(&r) as usize]),
            )
        };
        let closure = Verdict::from_witness("L2.14", instance, self.rack.closure_witness(&members));
        ConfigStabilizer { members, agreement, closure }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigStabilizer {
    pub members: Vec<usize>,
    pub agreement: Verdict,
    pub closure: Verdict,
}

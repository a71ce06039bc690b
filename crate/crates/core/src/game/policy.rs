use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::GameTree;
use crate::error::{Error, Result};

/// A real value per (infoset, action) pair, laid out in canonical infoset order.
///
/// This is the common storage for scores, advantages, regrets and policies.
#[derive(Debug, Clone, PartialEq)]
pub struct InfosetTable {
    offsets: Vec<usize>,
    values: Vec<f64>,
}

impl InfosetTable {
    pub fn zeros(tree: &GameTree) -> Self {
        Self::filled(tree, 0.0)
    }

    pub fn filled(tree: &GameTree, value: f64) -> Self {
        Self { offsets: tree.slot_offsets().to_vec(), values: vec![value; tree.num_slots()] }
    }

    pub fn from_values(tree: &GameTree, values: Vec<f64>) -> Result<Self> {
        if values.len() != tree.num_slots() {
            return Err(Error::PolicyDomain { expected: tree.num_slots(), actual: values.len() });
        }
        Ok(Self { offsets: tree.slot_offsets().to_vec(), values })
    }

    pub fn num_infosets(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn get(&self, infoset: usize) -> &[f64] {
        &self.values[self.offsets[infoset]..self.offsets[infoset + 1]]
    }

    pub fn get_mut(&mut self, infoset: usize) -> &mut [f64] {
        &mut self.values[self.offsets[infoset]..self.offsets[infoset + 1]]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.offsets.windows(2).map(|w| &self.values[w[0]..w[1]])
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// L-infinity distance to another table with the same layout.
    pub fn max_abs_diff(&self, other: &InfosetTable) -> f64 {
        debug_assert_eq!(self.values.len(), other.values.len());
        self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn check_domain(&self, tree: &GameTree) -> Result<()> {
        if self.offsets != tree.slot_offsets() {
            return Err(Error::PolicyDomain { expected: tree.num_slots(), actual: self.values.len() });
        }
        Ok(())
    }
}

/// A probability distribution over actions at every infoset.
#[derive(Debug, Clone, PartialEq)]
pub struct BehavioralPolicy(InfosetTable);

impl BehavioralPolicy {
    pub fn uniform(tree: &GameTree) -> Self {
        let mut table = InfosetTable::zeros(tree);
        for x in 0..tree.num_infosets() {
            let row = table.get_mut(x);
            let p = 1.0 / row.len() as f64;
            row.fill(p);
        }
        Self(table)
    }

    /// Wraps a table after checking that every row is a distribution.
    pub fn from_table(tree: &GameTree, table: InfosetTable) -> Result<Self> {
        table.check_domain(tree)?;
        let policy = Self(table);
        policy.validate(tree)?;
        Ok(policy)
    }

    /// Wraps a table known to hold distributions (e.g. a softmax output).
    pub(crate) fn from_table_unchecked(table: InfosetTable) -> Self {
        Self(table)
    }

    /// Draws each row from Dirichlet(1), optionally floored away from zero.
    pub fn random<R: Rng + ?Sized>(tree: &GameTree, rng: &mut R, floor: f64) -> Self {
        let mut table = InfosetTable::zeros(tree);
        for x in 0..tree.num_infosets() {
            let row = table.get_mut(x);
            for v in row.iter_mut() {
                let e: f64 = Exp1.sample(rng);
                *v = e + floor;
            }
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|v| *v /= s);
        }
        Self(table)
    }

    /// A deterministic policy playing `actions[x]` at infoset `x`.
    pub fn pure(tree: &GameTree, actions: &[usize]) -> Result<Self> {
        if actions.len() != tree.num_infosets() {
            return Err(Error::PolicyDomain { expected: tree.num_infosets(), actual: actions.len() });
        }
        let mut table = InfosetTable::zeros(tree);
        for (x, &a) in actions.iter().enumerate() {
            let row = table.get_mut(x);
            if a >= row.len() {
                return Err(Error::InvalidPolicy { infoset: x, reason: format!("action {a} out of range") });
            }
            row[a] = 1.0;
        }
        Ok(Self(table))
    }

    pub fn table(&self) -> &InfosetTable {
        &self.0
    }

    pub fn into_table(self) -> InfosetTable {
        self.0
    }

    pub fn get(&self, infoset: usize) -> &[f64] {
        self.0.get(infoset)
    }

    pub fn values(&self) -> &[f64] {
        self.0.values()
    }

    /// Replaces the rows of every infoset owned by `player` with those of `other`.
    pub fn with_player_from(&self, tree: &GameTree, player: usize, other: &BehavioralPolicy) -> Self {
        let mut out = self.clone();
        for x in tree.player_infosets(player) {
            out.0.get_mut(x.id).copy_from_slice(other.get(x.id));
        }
        out
    }

    /// Sets a single row; the caller guarantees it is a distribution.
    pub fn set_row(&mut self, infoset: usize, row: &[f64]) {
        self.0.get_mut(infoset).copy_from_slice(row);
    }

    pub fn max_abs_diff(&self, other: &BehavioralPolicy) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.0.values().iter().all(|&p| p > 0.0)
    }

    pub fn validate(&self, tree: &GameTree) -> Result<()> {
        self.0.check_domain(tree)?;
        for (x, row) in self.0.iter().enumerate() {
            if row.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
                return Err(Error::InvalidPolicy { infoset: x, reason: format!("bad entry in {row:?}") });
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidPolicy { infoset: x, reason: format!("row sums to {s}") });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::synthetic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_policy_is_valid() {
        let tree = synthetic::matching_pennies().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = BehavioralPolicy::random(&tree, &mut rng, 0.0);
            p.validate(&tree).unwrap();
        }
    }

    #[test]
    fn domain_mismatch_rejected() {
        let tree = synthetic::matching_pennies().unwrap();
        let err = InfosetTable::from_values(&tree, vec![0.5; 3]).unwrap_err();
        assert!(matches!(err, Error::PolicyDomain { expected: 4, actual: 3 }));
    }

    #[test]
    fn unnormalized_row_rejected() {
        let tree = synthetic::matching_pennies().unwrap();
        let t = InfosetTable::from_values(&tree, vec![0.5, 0.5, 0.7, 0.4]).unwrap();
        assert!(matches!(
            BehavioralPolicy::from_table(&tree, t),
            Err(Error::InvalidPolicy { infoset: 1, .. })
        ));
    }
}

//! Variable universes.
//!
//! Every polynomial carries the universe it lives in. Holomorphic and
//! anti-holomorphic variables come in conjugate pairs; auxiliary variables
//! (bump-function carriers) and the spectral parameter `lam` are real-neutral
//! and map to themselves under conjugation.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarKind {
    Holo { conj: usize },
    Anti { conj: usize },
    Aux,
    Lambda,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ring {
    names: Vec<String>,
    kinds: Vec<VarKind>,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    /// Standard coordinate layout for `d` complex coordinates named `names`:
    /// `[x_1..x_d, xb_1..xb_d, u_1..u_d, lam]`. The `u_j` are the bump carriers
    /// `1/(t_j - 1)` used by test forms.
    pub fn coordinates(names: &[&str]) -> RingRef {
        let d = names.len();
        let mut all = Vec::with_capacity(3 * d + 1);
        let mut kinds = Vec::with_capacity(3 * d + 1);
        for (j, n) in names.iter().enumerate() {
            all.push(n.to_string());
            kinds.push(VarKind::Holo { conj: d + j });
        }
        for (j, n) in names.iter().enumerate() {
            all.push(format!("{n}b"));
            kinds.push(VarKind::Anti { conj: j });
        }
        for n in names {
            all.push(format!("u_{n}"));
            kinds.push(VarKind::Aux);
        }
        all.push("lam".into());
        kinds.push(VarKind::Lambda);
        Arc::new(Ring { names: all, kinds })
    }

    /// Universe with several groups of complex variables followed by `lam`;
    /// no auxiliary carriers. Layout: all holomorphic names, then their
    /// conjugates in the same order, then `lam`.
    pub fn complex_pairs(names: &[String]) -> RingRef {
        let d = names.len();
        let mut all = Vec::with_capacity(2 * d + 1);
        let mut kinds = Vec::with_capacity(2 * d + 1);
        for (j, n) in names.iter().enumerate() {
            all.push(n.clone());
            kinds.push(VarKind::Holo { conj: d + j });
        }
        for (j, n) in names.iter().enumerate() {
            all.push(format!("{n}b"));
            kinds.push(VarKind::Anti { conj: j });
        }
        all.push("lam".into());
        kinds.push(VarKind::Lambda);
        Arc::new(Ring { names: all, kinds })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kind(&self, i: usize) -> VarKind {
        self.kinds[i]
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn lambda(&self) -> Option<usize> {
        self.kinds.iter().position(|k| *k == VarKind::Lambda)
    }

    /// Index of the conjugate variable (auxiliary and `lam` are self-conjugate).
    pub fn conj_index(&self, i: usize) -> usize {
        match self.kinds[i] {
            VarKind::Holo { conj } | VarKind::Anti { conj } => conj,
            VarKind::Aux | VarKind::Lambda => i,
        }
    }

    pub fn holo_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| matches!(self.kinds[i], VarKind::Holo { .. }))
            .collect()
    }

    pub fn is_holo(&self, i: usize) -> bool {
        matches!(self.kinds[i], VarKind::Holo { .. })
    }

    pub fn is_anti(&self, i: usize) -> bool {
        matches!(self.kinds[i], VarKind::Anti { .. })
    }

    /// Number of complex coordinates (holomorphic variables).
    pub fn dim(&self) -> usize {
        self.holo_indices().len()
    }

    /// Index of the auxiliary bump carrier for coordinate `j` in a
    /// [`Ring::coordinates`] universe.
    pub fn aux_index(&self, j: usize) -> Option<usize> {
        let d = self.dim();
        let i = 2 * d + j;
        (i < self.len() && self.kinds[i] == VarKind::Aux).then_some(i)
    }
}

pub fn same_universe(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub fn check_universe(a: &RingRef, b: &RingRef) -> Result<()> {
    if same_universe(a, b) {
        Ok(())
    } else {
        Err(Error::UniverseMismatch(format!("{:?} vs {:?}", a.names(), b.names())))
    }
}

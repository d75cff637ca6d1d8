use crate::error::{Error, Result};
use crate::model::state::{full_mask, StateVector};
use crate::model::structure::StructureFunction;

/// Default cap on the number of components for exact analysis. Local
/// metrics cost `Θ(3^N)` per posterior, so 20 keeps a full ranking on a
/// laptop.
pub const DEFAULT_COMPONENT_CAP: usize = 20;

/// Hard limit imposed by the 32-bit state masks (and `2^N` tables).
pub const MAX_COMPONENTS: usize = 30;

/// Shape of a structure function when it is a single series or parallel
/// block over all components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PureForm {
    Series,
    Parallel,
}

/// A system of binary components with a monotone structure function.
///
/// The system state of every component mask is tabulated once at
/// construction; all exact analyses read from that table.
#[derive(Debug, Clone)]
pub struct Network {
    names: Vec<String>,
    structure: StructureFunction,
    cap: usize,
    works: Vec<bool>,
}

impl Network {
    pub fn new(names: Vec<String>, structure: StructureFunction) -> Result<Self> {
        Self::with_cap(names, structure, DEFAULT_COMPONENT_CAP)
    }

    /// Like [`Network::new`] with a custom component cap (at most
    /// [`MAX_COMPONENTS`]).
    pub fn with_cap(names: Vec<String>, structure: StructureFunction, cap: usize) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidStructure("network has no components".into()));
        }
        let cap = cap.min(MAX_COMPONENTS);
        if n > cap {
            return Err(Error::SizeCap { n, cap });
        }
        structure.validate(n)?;
        let works = (0..1u32 << n)
            .map(|m| structure.works(StateVector::from_mask(m)))
            .collect();
        Ok(Self {
            names,
            structure,
            cap,
            works,
        })
    }

    /// Network with components named `c1..cN`.
    pub fn with_default_names(n: usize, structure: StructureFunction) -> Result<Self> {
        Self::new(default_names(n), structure)
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn structure(&self) -> &StructureFunction {
        &self.structure
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub(crate) fn full_mask(&self) -> u32 {
        full_mask(self.n())
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::ComponentIndex { index: i, n: self.n() });
        }
        Ok(())
    }

    pub(crate) fn check_cap(&self) -> Result<()> {
        if self.n() > self.cap {
            return Err(Error::SizeCap { n: self.n(), cap: self.cap });
        }
        Ok(())
    }

    /// `φ(s)`: true iff the system works under `s`.
    pub fn evaluate(&self, s: StateVector) -> Result<bool> {
        StateVector::new(s.mask(), self.n())?;
        Ok(self.works[s.mask() as usize])
    }

    /// System state for every mask in ascending order.
    pub fn works_table(&self) -> &[bool] {
        &self.works
    }

    /// Detects a structure that is one series or one parallel block over all
    /// components, whatever its encoding.
    pub fn pure_form(&self) -> Option<PureForm> {
        let full = self.full_mask() as usize;
        let series = self.works.iter().enumerate().all(|(m, &w)| w == (m == full));
        if series {
            return Some(PureForm::Series);
        }
        let parallel = self.works.iter().enumerate().all(|(m, &w)| w == (m != 0));
        parallel.then_some(PureForm::Parallel)
    }
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("c{i}")).collect()
}

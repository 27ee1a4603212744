//! Enumeration limits and tunable constants, in one place.

/// Caps on exhaustive computations. Exceeding one yields `SizeGuard`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest terminal set for partition enumeration in `check_unbreakable`.
    pub partition_terminals: usize,
    /// Work budget (roughly, elementary steps) for one `check_unbreakable`.
    pub unbreakable_work: u64,
    /// Largest graph handled by the `3^n` oracles.
    pub brute_vertices: usize,
    /// Largest graph handled by `carvable_oracle`.
    pub carvable_vertices: usize,
    /// Largest number of edge subsets enumerated by `brute_pway_cut`.
    pub pway_subsets: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            partition_terminals: 24,
            unbreakable_work: 2_000_000_000,
            brute_vertices: 12,
            carvable_vertices: 10,
            pway_subsets: 50_000_000,
        }
    }
}

/// Knobs for the decomposition pipeline.
#[derive(Clone, Copy, Debug)]
pub struct PipelineConfig {
    /// Net size constant.
    pub c_net: f64,
    /// Balanced-set attempts are `retry_factor * ⌈log₂ n⌉`.
    pub retry_factor: usize,
    /// Check each level's output exactly and carve any witness found.
    pub certify: bool,
    pub cover: crate::carving::CoverConfig,
    pub limits: Limits,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            c_net: 2.0,
            retry_factor: 20,
            certify: true,
            cover: crate::carving::CoverConfig::default(),
            limits: Limits::default(),
        }
    }
}

impl PipelineConfig {
    pub fn origin(&self) -> crate::origin::OriginConfig {
        crate::origin::OriginConfig {
            c_net: self.c_net,
            limits: self.limits,
        }
    }
}

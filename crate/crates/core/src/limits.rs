use std::env;

/// Environment variable overriding [`Limits::enumeration_cap`].
pub const ENUM_CAP_VAR: &str = "PINNED_WALKERS_ENUM_CAP";
/// Environment variable overriding [`Limits::state_cap`].
pub const STATE_CAP_VAR: &str = "PINNED_WALKERS_STATE_CAP";

pub const DEFAULT_ENUMERATION_CAP: usize = 24;
pub const DEFAULT_STATE_CAP: u64 = 3_000_000;

/// Resource caps for the operations that materialise a state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest K accepted by full enumerations of `C_{K,h}` shapes.
    pub enumeration_cap: usize,
    /// Largest number of shape states a chain model may hold.
    pub state_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

impl Limits {
    /// Defaults overridden by [`ENUM_CAP_VAR`] / [`STATE_CAP_VAR`] when set
    /// to a parseable value.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = env::var(ENUM_CAP_VAR).ok().and_then(|s| s.trim().parse().ok()) {
            limits.enumeration_cap = v;
        }
        if let Some(v) = env::var(STATE_CAP_VAR).ok().and_then(|s| s.trim().parse().ok()) {
            limits.state_cap = v;
        }
        limits
    }
}

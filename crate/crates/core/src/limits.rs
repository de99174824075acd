//! Cardinality caps. `LP_EMBED_CAP` overrides every default cap.

pub const CAP_ENV: &str = "LP_EMBED_CAP";

/// Default member cap for the exact L1 witness (max_len = 9).
pub const L1_MEMBER_CAP: usize = 1 << 10;

/// Default point cap for a single net.
pub const NET_CAP: usize = 20_000;

/// Default point cap for an assembled strictly convex witness.
pub const WITNESS_CAP: usize = 100_000;

pub fn cap(default: usize) -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(default)
}

/// Default point cap for exporting a witness as a distance matrix.
pub const EXPORT_CAP: usize = 6_000;

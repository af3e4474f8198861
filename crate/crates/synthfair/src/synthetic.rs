//! Generator for the bundled biased fixture.
//!
//! Each row has a latent merit `m ~ N(0, 1)`. The recorded outcome is
//! `approved` when `m + BIAS g + N(0, 0.5) > THRESHOLD`, so the privileged
//! group (`g = 1`) is approved more often at equal merit. The features are
//! a noisy merit score plus proxies of group membership:
//!
//! | column | content |
//! |--------|---------|
//! | `score` | `60 + 10 (m + SCORE_NOISE N(0, 1))` |
//! | `tenure` | `5 + TENURE_SHIFT g + N(0, 2)` years, clamped at 0 |
//! | `region` | `north`/`south`/`east`; north is likelier for g = 1 |
//! | `hours` | `40 + N(0, 5)`, unrelated to anything |
//! | `group` | `a` (privileged) or `b` |
//! | `outcome` | `approved` (favorable) or `denied` |

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub const BIAS: f64 = 0.8;
pub const THRESHOLD: f64 = 1.0;
pub const SCORE_NOISE: f64 = 1.5;
pub const TENURE_SHIFT: f64 = 4.0;
pub const HEADERS: [&str; 6] = ["score", "tenure", "region", "hours", "group", "outcome"];

pub const SCHEMA_TOML: &str = r#"label_column = "outcome"
favorable_value = "approved"
protected_column = "group"
privileged_value = "a"

[[columns]]
name = "score"
kind = "numeric"

[[columns]]
name = "tenure"
kind = "numeric"

[[columns]]
name = "region"
kind = "categorical"

[[columns]]
name = "hours"
kind = "numeric"

[[columns]]
name = "group"
kind = "categorical"

[[columns]]
name = "outcome"
kind = "categorical"
"#;

/// `n` rows as CSV text with a header line. Byte-identical for equal
/// arguments.
pub fn biased_csv(n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let std = Normal::new(0.0, 1.0).unwrap();
    let mut out = HEADERS.join(",");
    out.push('\n');
    for _ in 0..n {
        let privileged = rng.random_bool(0.5);
        let g = privileged as u8 as f64;
        let merit: f64 = std.sample(&mut rng);
        let approved = merit + BIAS * g + 0.5 * std.sample(&mut rng) > THRESHOLD;
        let score = 60.0 + 10.0 * (merit + SCORE_NOISE * std.sample(&mut rng));
        let tenure = (5.0 + TENURE_SHIFT * g + 2.0 * std.sample(&mut rng)).max(0.0);
        let u: f64 = rng.random();
        let region = match (privileged, u) {
            (true, u) if u < 0.6 => "north",
            (true, u) if u < 0.8 => "south",
            (false, u) if u < 0.2 => "north",
            (false, u) if u < 0.6 => "south",
            _ => "east",
        };
        let hours = 40.0 + 5.0 * std.sample(&mut rng);
        out.push_str(&format!(
            "{score:.2},{tenure:.2},{region},{hours:.1},{},{}\n",
            if privileged { "a" } else { "b" },
            if approved { "approved" } else { "denied" }
        ));
    }
    out
}

/// Row count and seed of the shipped `fixtures/biased.csv`.
pub const BUNDLED_ROWS: usize = 1600;
pub const BUNDLED_SEED: u64 = 2024;

//! JSON input formats for channels and input distributions.
//!
//! Both formats are deliberately small: a channel is its row-stochastic
//! matrix, a distribution is its probability vector, and symbol labels are
//! optional (defaulting to `"0"`, `"1"`, …). All structural validation —
//! row sums, probability ranges, alphabet sizes — happens in the core
//! constructors, so a file that loads is a file the rest of the toolkit
//! accepts.

use std::fs;
use std::path::Path;

use augustin_core::dist::{Alphabet, Channel, Distribution};
use augustin_core::{Error, Result};
use serde::Deserialize;

/// On-disk channel:
///
/// ```json
/// {"rows": [[0.9, 0.1], [0.1, 0.9]], "input_labels": ["a", "b"]}
/// ```
#[derive(Debug, Deserialize)]
pub struct ChannelFile {
    /// Transition rows, one probability vector per input symbol.
    pub rows: Vec<Vec<f64>>,
    /// Input symbol labels; numbered when absent.
    #[serde(default)]
    pub input_labels: Option<Vec<String>>,
    /// Output symbol labels; numbered when absent.
    #[serde(default)]
    pub output_labels: Option<Vec<String>>,
}

/// On-disk distribution:
///
/// ```json
/// {"probs": [0.5, 0.5]}
/// ```
#[derive(Debug, Deserialize)]
pub struct DistributionFile {
    /// The probability vector.
    pub probs: Vec<f64>,
    /// Symbol labels; numbered when absent.
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn build_alphabet(
    labels: Option<Vec<String>>,
    len: usize,
    what: &str,
    path: &Path,
) -> Result<Alphabet> {
    match labels {
        Some(l) if l.len() != len => Err(Error::InvalidInput(format!(
            "{}: {what} declares {} labels for {len} symbols",
            path.display(),
            l.len()
        ))),
        Some(l) => Alphabet::new(l),
        None => Alphabet::numbered(len),
    }
}

/// Loads and validates a channel file.
pub fn load_channel(path: &Path) -> Result<Channel> {
    let file: ChannelFile = read_json(path)?;
    let num_outputs = file.rows.first().map(Vec::len).unwrap_or(0);
    let input = build_alphabet(file.input_labels, file.rows.len(), "input alphabet", path)?;
    let output = build_alphabet(file.output_labels, num_outputs, "output alphabet", path)?;
    Channel::from_matrix(input, output, &file.rows)
}

/// Loads and validates a distribution file.
pub fn load_distribution(path: &Path) -> Result<Distribution> {
    let file: DistributionFile = read_json(path)?;
    let alphabet = build_alphabet(file.labels, file.probs.len(), "alphabet", path)?;
    Distribution::new(alphabet, file.probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
        let mut path = std::env::temp_dir();
        path.push(format!("augustin-io-test-{name}-{}", std::process::id()));
        let mut f = fs::File::create(&path).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        path
    }

    #[test]
    fn channel_round_trips() {
        let path = temp_file(
            "bsc",
            r#"{"rows": [[0.9, 0.1], [0.1, 0.9]], "input_labels": ["a", "b"]}"#,
        );
        let channel = load_channel(&path).unwrap();
        assert_eq!(channel.num_inputs(), 2);
        assert_eq!(channel.input_alphabet().labels(), ["a", "b"]);
        assert_eq!(channel.output_alphabet().labels(), ["0", "1"]);
        assert_eq!(channel.row(0).probs(), [0.9, 0.1]);
        fs::remove_file(path).unwrap();
    }

    #[test]
    fn malformed_json_is_an_input_error() {
        let path = temp_file("bad", r#"{"rows": [[0.9, 0.1"#);
        match load_channel(&path) {
            Err(Error::InvalidInput(msg)) => assert!(msg.contains("augustin-io-test")),
            other => panic!("expected InvalidInput, got {other:?}"),
        }
        fs::remove_file(path).unwrap();
    }

    #[test]
    fn distributions_validate_like_core() {
        let path = temp_file("dist", r#"{"probs": [0.25, 0.75]}"#);
        let p = load_distribution(&path).unwrap();
        assert_eq!(p.probs(), [0.25, 0.75]);
        fs::remove_file(path).unwrap();

        let path = temp_file("subnormalized", r#"{"probs": [0.25, 0.25]}"#);
        assert!(load_distribution(&path).is_err());
        fs::remove_file(path).unwrap();

        let path = temp_file("labels", r#"{"probs": [0.5, 0.5], "labels": ["x"]}"#);
        assert!(load_distribution(&path).is_err());
        fs::remove_file(path).unwrap();
    }
}

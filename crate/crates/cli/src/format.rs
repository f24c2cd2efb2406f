//! The JSON instance format.
//!
//! ```json
//! {
//!   "players": 3,
//!   "bits": [ { "id": "a", "weight": [1, 1] }, { "id": "b", "weight": [3, 10] } ],
//!   "observes": { "1": ["a", "b"], "2": ["b"] },
//!   "planted": [[1, 3], [2]]
//! }
//! ```
//!
//! Weights are `[numerator, denominator]` pairs with positive denominators.
//! Player labels in `observes` and `planted` are 1-based, matching all
//! human-facing output; they are translated to 0-based indices on load. The
//! optional `planted` field records the partition a generated instance was
//! built around.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use ratefair_core::{BitSourceModel, Coalition, Partition, Rat};

#[derive(Serialize, Deserialize)]
struct BitEntry {
    id: String,
    weight: (i64, i64),
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    players: usize,
    bits: Vec<BitEntry>,
    observes: BTreeMap<String, Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    planted: Option<Vec<Vec<usize>>>,
}

/// A parsed instance: the model plus the planted partition, when recorded.
pub struct LoadedInstance {
    /// The entropy model.
    pub model: BitSourceModel,
    /// Partition the instance was generated around, if any.
    pub planted: Option<Partition>,
}

fn parse_label(label: &str, players: usize) -> Result<usize> {
    let raw: usize = label
        .trim()
        .parse()
        .with_context(|| format!("player label {label:?} is not a number"))?;
    if raw == 0 || raw > players {
        bail!("player label {raw} outside 1..={players}");
    }
    Ok(raw - 1)
}

/// Deserializes an instance from JSON text.
pub fn parse_instance(text: &str) -> Result<LoadedInstance> {
    let file: InstanceFile = serde_json::from_str(text).context("malformed instance JSON")?;
    if file.players == 0 {
        bail!("instance declares zero players");
    }
    let bits = file
        .bits
        .into_iter()
        .map(|b| {
            let (num, den) = b.weight;
            if den <= 0 {
                bail!("bit {:?}: denominator must be positive, got {den}", b.id);
            }
            let w = Rat::new(num, den).expect("denominator checked nonzero");
            Ok((b.id, w))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut observes: Vec<Vec<String>> = vec![Vec::new(); file.players];
    for (label, ids) in &file.observes {
        let player = parse_label(label, file.players)?;
        observes[player] = ids.clone();
    }

    let model = BitSourceModel::from_owned(bits, observes)
        .map_err(|e| anyhow::anyhow!("invalid instance: {e}"))?;

    let planted = file
        .planted
        .map(|blocks| {
            let coalitions = blocks
                .iter()
                .map(|members| {
                    let zero_based = members
                        .iter()
                        .map(|&m| {
                            if m == 0 || m > file.players {
                                bail!("planted label {m} outside 1..={}", file.players);
                            }
                            Ok(m - 1)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Coalition::from_members(file.players, zero_based)
                        .map_err(|e| anyhow::anyhow!("invalid planted block: {e}"))
                })
                .collect::<Result<Vec<_>>>()?;
            Partition::new(coalitions).map_err(|e| anyhow::anyhow!("invalid planted partition: {e}"))
        })
        .transpose()?;

    Ok(LoadedInstance { model, planted })
}

/// Reads an instance file from disk.
pub fn load_instance(path: &Path) -> Result<LoadedInstance> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read instance file {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("in {}", path.display()))
}

/// Serializes a model (and optionally its planted partition) to pretty JSON.
///
/// Deterministic: identical inputs produce byte-identical text.
pub fn instance_to_json(model: &BitSourceModel, planted: Option<&Partition>) -> Result<String> {
    let bits = model
        .bits()
        .iter()
        .map(|b| {
            let weight = b.weight().to_i64_pair().with_context(|| {
                format!("bit {:?}: weight does not fit the file format", b.id())
            })?;
            Ok(BitEntry { id: b.id().to_string(), weight })
        })
        .collect::<Result<Vec<_>>>()?;

    let observes: BTreeMap<String, Vec<String>> = (0..model.players())
        .map(|p| {
            let ids = model.observed_ids(p).into_iter().map(String::from).collect();
            ((p + 1).to_string(), ids)
        })
        .collect();

    let planted = planted.map(|partition| {
        partition
            .blocks()
            .iter()
            .map(|b| b.members().map(|p| p + 1).collect())
            .collect()
    });

    let file = InstanceFile { players: model.players(), bits, observes, planted };
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    Ok(text)
}

/// Writes an instance file to disk.
pub fn save_instance(
    path: &Path,
    model: &BitSourceModel,
    planted: Option<&Partition>,
) -> Result<()> {
    let text = instance_to_json(model, planted)?;
    std::fs::write(path, text)
        .with_context(|| format!("cannot write instance file {}", path.display()))
}

/// Parses a comma-separated rate list like `"1,9/5,2"`.
pub fn parse_rates(text: &str) -> Result<ratefair_core::RateVector> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<Rat>()
                .map_err(|e| anyhow::anyhow!("rate {part:?}: {e}"))
        })
        .collect::<Result<_>>()
}

/// Parses a 1-based permutation like `"3,2,1"`.
pub fn parse_permutation(text: &str) -> Result<ratefair_core::Permutation> {
    let order = text
        .split(',')
        .map(|part| {
            let label: usize = part
                .trim()
                .parse()
                .with_context(|| format!("permutation entry {part:?} is not a number"))?;
            if label == 0 {
                bail!("permutation labels are 1-based");
            }
            Ok(label - 1)
        })
        .collect::<Result<Vec<_>>>()?;
    ratefair_core::Permutation::from_order(&order).map_err(|e| anyhow::anyhow!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_json() -> &'static str {
        r#"{
            "players": 3,
            "bits": [
                {"id": "a", "weight": [1, 1]},
                {"id": "b", "weight": [3, 10]}
            ],
            "observes": {"1": ["a", "b"], "2": ["b"], "3": []}
        }"#
    }

    #[test]
    fn parses_and_translates_labels() {
        let inst = parse_instance(sample_json()).unwrap();
        assert_eq!(inst.model.players(), 3);
        let x = Coalition::from_members(3, [1]).unwrap();
        assert_eq!(inst.model.entropy(x), Rat::new(3, 10).unwrap());
        assert!(inst.planted.is_none());
    }

    #[test]
    fn rejects_bad_denominator_and_labels() {
        let bad_den = r#"{"players":1,"bits":[{"id":"a","weight":[1,0]}],"observes":{"1":["a"]}}"#;
        assert!(parse_instance(bad_den).is_err());
        let bad_label =
            r#"{"players":1,"bits":[{"id":"a","weight":[1,2]}],"observes":{"2":["a"]}}"#;
        assert!(parse_instance(bad_label).is_err());
        let zero_label =
            r#"{"players":1,"bits":[{"id":"a","weight":[1,2]}],"observes":{"0":["a"]}}"#;
        assert!(parse_instance(zero_label).is_err());
    }

    #[test]
    fn round_trips_with_planted_partition() {
        let json = r#"{
            "players": 3,
            "bits": [{"id": "a", "weight": [2, 1]}, {"id": "b", "weight": [1, 2]}],
            "observes": {"1": ["a"], "2": ["b"], "3": ["a"]},
            "planted": [[1, 3], [2]]
        }"#;
        let inst = parse_instance(json).unwrap();
        let planted = inst.planted.unwrap();
        assert_eq!(planted.block_count(), 2);
        let text = instance_to_json(&inst.model, Some(&planted)).unwrap();
        let again = parse_instance(&text).unwrap();
        assert_eq!(again.model, inst.model);
        assert_eq!(again.planted.unwrap(), planted);
        // serialization is deterministic
        assert_eq!(text, instance_to_json(&inst.model, Some(&planted)).unwrap());
    }

    #[test]
    fn rate_and_permutation_parsing() {
        let r = parse_rates("1, 9/5 ,2").unwrap();
        assert_eq!(r.rates()[1], Rat::new(9, 5).unwrap());
        assert!(parse_rates("1,x").is_err());
        let p = parse_permutation("3,2,1").unwrap();
        assert_eq!(p.player_at(0), 2);
        assert!(parse_permutation("0,1").is_err());
        assert!(parse_permutation("1,1").is_err());
    }
}

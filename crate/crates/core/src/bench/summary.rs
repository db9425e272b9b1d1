use std::collections::BTreeMap;

use super::BenchRecord;

/// Arithmetic means of one predictor's records.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorSummary {
    pub predictor: String,
    pub images: usize,
    pub mean_compressed_size: f64,
    pub mean_ratio: f64,
    pub mean_percent_of_original: f64,
    pub mean_time_seconds: f64,
}

/// Per-predictor means, ordered by predictor tag. `None` for no records.
pub fn summarize(records: &[BenchRecord]) -> Option<Vec<PredictorSummary>> {
    if records.is_empty() {
        return None;
    }
    let mut groups: BTreeMap<&str, Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.predictor.as_str()).or_default().push(r);
    }
    let mean = |rs: &[&BenchRecord], f: fn(&BenchRecord) -> f64| {
        rs.iter().map(|r| f(r)).sum::<f64>() / rs.len() as f64
    };
    Some(
        groups
            .into_iter()
            .map(|(predictor, rs)| PredictorSummary {
                predictor: predictor.to_string(),
                images: rs.len(),
                mean_compressed_size: mean(&rs, |r| r.compressed_size_bytes as f64),
                mean_ratio: mean(&rs, |r| r.compression_ratio),
                mean_percent_of_original: mean(&rs, |r| r.percent_of_original),
                mean_time_seconds: mean(&rs, |r| r.time_seconds),
            })
            .collect(),
    )
}

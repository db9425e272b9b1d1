use std::io;
use std::path::Path;

use super::BenchRecord;

pub const CSV_HEADER: [&str; 9] = [
    "filename",
    "width",
    "height",
    "original_size_bytes",
    "compressed_size_bytes",
    "time_seconds",
    "percent_of_original",
    "compression_ratio",
    "predictor",
];

fn fixed(v: f64) -> String {
    format!("{v:.6}")
}

fn write_records<W: io::Write>(out: W, records: &[BenchRecord]) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.filename.clone(),
            r.width.to_string(),
            r.height.to_string(),
            r.original_size_bytes.to_string(),
            r.compressed_size_bytes.to_string(),
            fixed(r.time_seconds),
            fixed(r.percent_of_original),
            fixed(r.compression_ratio),
            r.predictor.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// CSV text for `records`: fixed header, LF line endings, six decimals.
pub fn format_csv(records: &[BenchRecord]) -> String {
    let mut buf = Vec::new();
    write_records(&mut buf, records).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV fields are UTF-8")
}

pub fn write_csv(path: &Path, records: &[BenchRecord]) -> Result<(), csv::Error> {
    let file = std::fs::File::create(path)?;
    write_records(io::BufWriter::new(file), records)
}

/// Reads a report written by [`write_csv`]. Float columns come back rounded
/// to the six decimals they were written with.
pub fn read_csv(path: &Path) -> Result<Vec<BenchRecord>, csv::Error> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or("");
        let num = |i: usize| -> Result<f64, csv::Error> {
            field(i).parse::<f64>().map_err(|e| {
                csv::Error::from(io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("column {}: {e}", CSV_HEADER[i]),
                ))
            })
        };
        out.push(BenchRecord {
            filename: field(0).to_string(),
            width: num(1)? as u32,
            height: num(2)? as u32,
            original_size_bytes: num(3)? as u64,
            compressed_size_bytes: num(4)? as u64,
            time_seconds: num(5)?,
            percent_of_original: num(6)?,
            compression_ratio: num(7)?,
            predictor: field(8).to_string(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_text() {
        let records = vec![
            BenchRecord::new("a.png".into(), 2, 3, 300, 120, 0.25, "gap".into()),
            BenchRecord::new("b, c.png".into(), 1, 1, 70, 30, 1e-7, "ged:4".into()),
        ];
        let text = format_csv(&records);
        assert_eq!(
            text,
            "filename,width,height,original_size_bytes,compressed_size_bytes,time_seconds,percent_of_original,compression_ratio,predictor\n\
             a.png,2,3,300,120,0.250000,40.000000,2.500000,gap\n\
             \"b, c.png\",1,1,70,30,0.000000,42.857143,2.333333,ged:4\n"
        );
    }

    #[test]
    fn read_back() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let records = vec![BenchRecord::new("a.png".into(), 2, 3, 300, 120, 0.25, "gap".into())];
        write_csv(&path, &records).unwrap();
        assert_eq!(read_csv(&path).unwrap(), records);
    }
}

//! Machine-readable row output: CSV (17 significant digits, header row,
//! complex values as re/im columns) and JSON (array of row objects).

use std::io::Write;

use crate::config::Format;

/// One output row; complex quantities carry both components.
pub struct Row {
    pub input: f64,
    pub value: f64,
    pub im: Option<f64>,
    pub abs_err: Option<f64>,
    pub converged: Option<bool>,
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_rows<W: Write>(
    mut w: W,
    rows: &[Row],
    format: Format,
    input_name: &str,
) -> std::io::Result<()> {
    let complex = rows.iter().any(|r| r.im.is_some());
    let with_err = rows.iter().any(|r| r.abs_err.is_some());
    match format {
        Format::Csv => {
            let mut header: Vec<&str> = vec![input_name];
            if complex {
                header.extend(["re", "im"]);
            } else {
                header.push("value");
            }
            if with_err {
                header.extend(["abs_err", "converged"]);
            }
            writeln!(w, "{}", header.join(","))?;
            for r in rows {
                let mut fields = vec![fmt(r.input), fmt(r.value)];
                if complex {
                    fields.push(fmt(r.im.unwrap_or(0.0)));
                }
                if with_err {
                    fields.push(fmt(r.abs_err.unwrap_or(f64::NAN)));
                    fields.push(r.converged.unwrap_or(true).to_string());
                }
                writeln!(w, "{}", fields.join(","))?;
            }
        }
        Format::Json => {
            let array: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    let mut obj = serde_json::Map::new();
                    obj.insert(input_name.to_string(), r.input.into());
                    if complex {
                        obj.insert("re".into(), r.value.into());
                        obj.insert("im".into(), r.im.unwrap_or(0.0).into());
                    } else {
                        obj.insert("value".into(), r.value.into());
                    }
                    if with_err {
                        obj.insert("abs_err".into(), r.abs_err.unwrap_or(f64::NAN).into());
                        obj.insert("converged".into(), r.converged.unwrap_or(true).into());
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            serde_json::to_writer_pretty(&mut w, &array)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

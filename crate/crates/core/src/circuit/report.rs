//! Size/depth records for circuit transforms, as `key=value` lines.

use std::fmt;

use super::Circuit;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformReport {
    pub construction: String,
    pub input_size: usize,
    pub input_depth: usize,
    pub output_size: usize,
    pub output_depth: usize,
    pub depth_increment: i64,
    /// Construction-specific parameters (nodes, precision, ...).
    pub extra: Vec<(String, String)>,
}

impl TransformReport {
    pub fn new(construction: &str, input: &Circuit, output: &Circuit) -> Self {
        let (input_size, input_depth) = (input.size(), input.depth());
        let (output_size, output_depth) = (output.size(), output.depth());
        TransformReport {
            construction: construction.to_string(),
            input_size,
            input_depth,
            output_size,
            output_depth,
            depth_increment: output_depth as i64 - input_depth as i64,
            extra: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.extra.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.extra
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Parses records separated by blank lines.
    pub fn parse_all(text: &str) -> Result<Vec<TransformReport>> {
        let mut out = Vec::new();
        for block in text.split("\n\n") {
            let lines: Vec<&str> = block
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .collect();
            if lines.is_empty() {
                continue;
            }
            let mut r = TransformReport {
                construction: String::new(),
                input_size: 0,
                input_depth: 0,
                output_size: 0,
                output_depth: 0,
                depth_increment: 0,
                extra: Vec::new(),
            };
            let mut seen_construction = false;
            for line in lines {
                let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("expected key=value, found `{line}`"),
                })?;
                let num = || -> Result<usize> {
                    v.parse().map_err(|_| Error::Parse {
                        pos: 0,
                        msg: format!("bad number for {k}: `{v}`"),
                    })
                };
                match k {
                    "construction" => {
                        r.construction = v.to_string();
                        seen_construction = true;
                    }
                    "input_size" => r.input_size = num()?,
                    "input_depth" => r.input_depth = num()?,
                    "output_size" => r.output_size = num()?,
                    "output_depth" => r.output_depth = num()?,
                    "depth_increment" => {
                        r.depth_increment = v.parse().map_err(|_| Error::Parse {
                            pos: 0,
                            msg: format!("bad depth increment `{v}`"),
                        })?
                    }
                    _ => r.extra.push((k.to_string(), v.to_string())),
                }
            }
            if !seen_construction {
                return Err(Error::Parse {
                    pos: 0,
                    msg: "record without construction".into(),
                });
            }
            out.push(r);
        }
        Ok(out)
    }
}

impl fmt::Display for TransformReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "construction={}", self.construction)?;
        writeln!(f, "input_size={}", self.input_size)?;
        writeln!(f, "input_depth={}", self.input_depth)?;
        writeln!(f, "output_size={}", self.output_size)?;
        writeln!(f, "output_depth={}", self.output_depth)?;
        writeln!(f, "depth_increment={}", self.depth_increment)?;
        for (k, v) in &self.extra {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

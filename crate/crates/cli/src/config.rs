//! Parameter grids and the merge of config-file values with flags.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::{invalid, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Lin,
    Log,
}

/// A scan axis: a single value, a comma list, or `start:stop:lin|log:count`.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        spacing: Spacing,
        count: usize,
    },
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Grid::List(ref v) => v.clone(),
            Grid::Range {
                start,
                stop,
                spacing,
                count,
            } => {
                if count == 1 {
                    return vec![start];
                }
                let last = (count - 1) as f64;
                let mut v: Vec<f64> = (0..count)
                    .map(|i| {
                        let f = i as f64 / last;
                        match spacing {
                            Spacing::Lin => start + (stop - start) * f,
                            Spacing::Log => (start.ln() + (stop.ln() - start.ln()) * f).exp(),
                        }
                    })
                    .collect();
                // pin the endpoints exactly
                v[0] = start;
                v[count - 1] = stop;
                v
            }
        }
    }

    pub fn single(&self) -> Option<f64> {
        match self.values().as_slice() {
            [x] => Some(*x),
            _ => None,
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("not a finite number: {t:?}"))
        };
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 4 {
                return Err(format!("range {s:?} must look like start:stop:lin|log:count"));
            }
            let start = num(parts[0])?;
            let stop = num(parts[1])?;
            let spacing = match parts[2].trim() {
                "lin" => Spacing::Lin,
                "log" => Spacing::Log,
                other => return Err(format!("unknown spacing {other:?} (use lin or log)")),
            };
            let count: usize = parts[3]
                .trim()
                .parse()
                .map_err(|_| format!("count {:?} is not a positive integer", parts[3]))?;
            if count == 0 {
                return Err("range count must be at least 1".into());
            }
            if spacing == Spacing::Log && !(start > 0.0 && stop > 0.0) {
                return Err(format!("log range {s:?} needs positive endpoints"));
            }
            return Ok(Grid::Range {
                start,
                stop,
                spacing,
                count,
            });
        }
        let v = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
        if v.is_empty() {
            return Err("empty value list".into());
        }
        Ok(Grid::List(v))
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grid::List(v) => {
                let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", s.join(","))
            }
            Grid::Range {
                start,
                stop,
                spacing,
                count,
            } => {
                let sp = if *spacing == Spacing::Lin { "lin" } else { "log" };
                write!(f, "{start}:{stop}:{sp}:{count}")
            }
        }
    }
}

/// Config-file values plus the record of what was finally used.
pub struct Resolver {
    file: Map<String, Value>,
    pub echo: Map<String, Value>,
}

impl Resolver {
    pub fn new(file: Map<String, Value>) -> Self {
        Self { file, echo: Map::new() }
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::new(Map::new()));
        };
        let text = std::fs::read_to_string(path)?;
        match serde_json::from_str::<Value>(&text) {
            Ok(Value::Object(m)) => Ok(Self::new(m)),
            Ok(_) => Err(invalid(format!("config {} must be a JSON object", path.display()))),
            Err(e) => Err(invalid(format!("config {}: {e}", path.display()))),
        }
    }

    /// Config value for `key` or one of its aliases, as the string a flag would carry.
    fn lookup(&self, keys: &[&str]) -> Result<Option<String>, CliError> {
        for k in keys {
            if let Some(v) = self.file.get(*k) {
                return match v {
                    Value::Number(n) => Ok(Some(n.to_string())),
                    Value::String(s) => Ok(Some(s.clone())),
                    Value::Array(items) => {
                        let parts = items
                            .iter()
                            .map(|x| match x {
                                Value::Number(n) => Ok(n.to_string()),
                                _ => Err(invalid(format!("config key {k:?}: list entries must be numbers"))),
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(Some(parts.join(",")))
                    }
                    _ => Err(invalid(format!("config key {k:?} must be a number, string or list"))),
                };
            }
        }
        Ok(None)
    }

    /// Flag, else config file, else `default`.
    pub fn grid(&mut self, keys: &[&str], flag: Option<&Grid>, default: &str) -> Result<Grid, CliError> {
        let g = match flag {
            Some(g) => g.clone(),
            None => {
                let raw = self.lookup(keys)?.unwrap_or_else(|| default.to_string());
                raw.parse::<Grid>().map_err(|e| invalid(format!("{}: {e}", keys[0])))?
            }
        };
        self.echo.insert(keys[0].to_string(), Value::String(g.to_string()));
        Ok(g)
    }

    pub fn scalar(&mut self, keys: &[&str], flag: Option<f64>, default: f64) -> Result<f64, CliError> {
        let g = self.grid(keys, flag.map(|x| Grid::List(vec![x])).as_ref(), &default.to_string())?;
        g.single()
            .ok_or_else(|| invalid(format!("{} takes a single value, got {g}", keys[0])))
    }

    pub fn counts(&mut self, keys: &[&str], flag: Option<&Grid>, default: &str) -> Result<Vec<usize>, CliError> {
        let g = self.grid(keys, flag, default)?;
        g.values()
            .into_iter()
            .map(|x| {
                if x >= 1.0 && x.fract() == 0.0 && x <= 1e6 {
                    Ok(x as usize)
                } else {
                    Err(invalid(format!("{}: {x} is not a positive integer", keys[0])))
                }
            })
            .collect()
    }

    pub fn text(&mut self, keys: &[&str], flag: Option<&str>) -> Result<Option<String>, CliError> {
        let v = match flag {
            Some(s) => Some(s.to_string()),
            None => self.lookup(keys)?,
        };
        if let Some(s) = &v {
            self.echo.insert(keys[0].to_string(), Value::String(s.clone()));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_syntax() {
        let g: Grid = "0.01:2:log:100".parse().unwrap();
        let v = g.values();
        assert_eq!(v.len(), 100);
        assert_eq!(v[0], 0.01);
        assert_eq!(v[99], 2.0);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        let g: Grid = "1:3:lin:3".parse().unwrap();
        assert_eq!(g.values(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn lists_and_scalars() {
        let g: Grid = "1,5,10,20".parse().unwrap();
        assert_eq!(g.values(), vec![1.0, 5.0, 10.0, 20.0]);
        assert_eq!("2.5".parse::<Grid>().unwrap().single(), Some(2.5));
    }

    #[test]
    fn malformed_ranges() {
        for s in [
            "1:2:lin",
            "0:1:log:5",
            "1:2:cubic:4",
            "1:2:lin:0",
            "a,b",
            "",
            "1:2:lin:x",
        ] {
            assert!(s.parse::<Grid>().is_err(), "{s}");
        }
    }

    #[test]
    fn flags_override_file() {
        let file: Map<String, Value> =
            serde_json::from_str(r#"{"w": 2.0, "T-range": "0.1:1:lin:4", "N": [1, 5]}"#).unwrap();
        let mut r = Resolver::new(file);
        assert_eq!(r.scalar(&["w"], None, 1.0).unwrap(), 2.0);
        assert_eq!(r.scalar(&["w"], Some(3.0), 1.0).unwrap(), 3.0);
        assert_eq!(r.grid(&["T", "T-range"], None, "1").unwrap().values().len(), 4);
        assert_eq!(r.counts(&["N"], None, "1").unwrap(), vec![1, 5]);
        assert_eq!(r.scalar(&["g"], None, 1.0).unwrap(), 1.0);
    }
}

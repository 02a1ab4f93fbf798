use std::path::Path;

use kendall::{Alpha64, StepDistribution64};

/// `a:b:n`, `n >= 2` evenly spaced points from `a` to `b` inclusive.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

pub fn grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("grid '{s}' is not of the form start:stop:count"));
    };
    let start = number(a)?;
    let stop = number(b)?;
    let count: usize = n
        .trim()
        .parse()
        .map_err(|_| format!("grid count '{n}' is not an integer"))?;
    if count < 2 {
        return Err(format!("grid count '{n}' must be at least 2"));
    }
    if start >= stop {
        return Err(format!("grid '{s}' needs start < stop"));
    }
    Ok(Grid { start, stop, count })
}

pub fn number(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("'{s}' is not a finite number")),
    }
}

pub fn alpha(s: &str) -> Result<Alpha64, String> {
    let v = number(s)?;
    Alpha64::new(v).map_err(|_| format!("alpha '{s}' must be positive"))
}

/// `two-point:x=<x>`, `pareto:p=<p>`, `uniform`, `mixture:p=<p>` or
/// `table:<path>`.
pub fn dist(s: &str) -> Result<StepDistribution64, String> {
    let (family, rest) = s.split_once(':').unwrap_or((s, ""));
    let param = |key: &str| -> Result<f64, String> {
        let value = rest
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| format!("'{s}' needs the parameter {key}=<value>"))?;
        number(value)
    };
    let built = match family {
        "two-point" => StepDistribution64::two_point(param("x")?),
        "pareto" => StepDistribution64::pareto(param("p")?),
        "mixture" => StepDistribution64::mixture(param("p")?),
        "uniform" if rest.is_empty() => Ok(StepDistribution64::uniform()),
        "uniform" => return Err(format!("'{s}': uniform takes no parameters")),
        "table" if !rest.is_empty() => return table(Path::new(rest)),
        "table" => return Err(format!("'{s}' needs a path, as in table:<path>")),
        _ => return Err(format!("unknown distribution '{family}'")),
    };
    built.map_err(|e| format!("'{s}': {e}"))
}

fn table(path: &Path) -> Result<StepDistribution64, String> {
    let (t, f) = read_columns(path, 0, 1)?;
    StepDistribution64::tabulated(t, f).map_err(|e| format!("{}: {e}", path.display()))
}

/// Two numeric columns of a CSV file with a header row.
pub fn read_columns(path: &Path, a: usize, b: usize) -> Result<(Vec<f64>, Vec<f64>), String> {
    let shown = path.display();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format!("{shown}: {e}"))?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format!("{shown}: {e}"))?;
        let cell = |k: usize| -> Result<f64, String> {
            let raw = record
                .get(k)
                .ok_or_else(|| format!("{shown}: row {} has no column {}", i + 1, k + 1))?;
            number(raw).map_err(|e| format!("{shown}: row {}: {e}", i + 1))
        };
        xs.push(cell(a)?);
        ys.push(cell(b)?);
    }
    Ok((xs, ys))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = grid("0:2:5").unwrap();
        assert_eq!(g.points(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(grid("0.1:0.3:3").unwrap().points().last(), Some(&0.3));
        assert!(grid("1:0:5").unwrap_err().contains("1:0:5"));
        assert!(grid("0:1:1").unwrap_err().contains("'1'"));
        assert!(grid("0:1").is_err());
        assert!(grid("0:x:3").unwrap_err().contains("'x'"));
    }

    #[test]
    fn distributions() {
        assert_eq!(
            dist("two-point:x=1.0").unwrap(),
            StepDistribution64::two_point(1.0).unwrap()
        );
        assert_eq!(
            dist("pareto:p=2").unwrap(),
            StepDistribution64::pareto(2.0).unwrap()
        );
        assert_eq!(
            dist("mixture:p=0.5").unwrap(),
            StepDistribution64::mixture(0.5).unwrap()
        );
        assert_eq!(dist("uniform").unwrap(), StepDistribution64::uniform());
        assert!(dist("cauchy").unwrap_err().contains("cauchy"));
        assert!(dist("pareto:q=2").is_err());
        assert!(dist("pareto:p=-1").unwrap_err().contains("pareto:p=-1"));
        assert!(dist("uniform:x=1").is_err());
        assert!(dist("table:/nonexistent.csv").is_err());
    }

    #[test]
    fn table_from_file() {
        let path = std::env::temp_dir().join(format!("kendall-table-{}.csv", std::process::id()));
        std::fs::write(&path, "t,F\n0.5,0.75\n1.0,1.0\n").unwrap();
        let d = dist(&format!("table:{}", path.display())).unwrap();
        assert_eq!(d.cdf(1.0), 1.0);
        assert!((d.cdf(0.25) - 0.625).abs() < 1e-15);
        std::fs::write(&path, "t,F\n1.0,0.75\n0.5,1.0\n").unwrap();
        assert!(dist(&format!("table:{}", path.display())).is_err());
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn scalars() {
        assert!(alpha("0").is_err());
        assert_eq!(alpha("1.5").unwrap().get(), 1.5);
        assert!(number("inf").is_err());
    }
}

use rand::Rng;

use crate::error::{param, structure, Error, Result};

/// Points `0..n` with a symmetric distance table, ordered marks, and a
/// positive scale applied on lookup.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    table: Vec<f64>,
    marks: Vec<(String, usize)>,
    scale: f64,
}

impl FiniteMetricSpace {
    /// `table` is row-major `n × n`.
    pub fn from_table(n: usize, table: Vec<f64>) -> Result<Self> {
        if table.len() != n * n {
            return Err(Error::SizeMismatch(format!("expected {} entries, found {}", n * n, table.len())));
        }
        for i in 0..n {
            if table[i * n + i] != 0.0 {
                return Err(structure(format!("nonzero diagonal at {i}")));
            }
            for j in i + 1..n {
                let d = table[i * n + j];
                if !d.is_finite() || d <= 0.0 {
                    return Err(structure(format!("distance ({i}, {j}) must be finite and positive")));
                }
                if d != table[j * n + i] {
                    return Err(structure(format!("table is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(FiniteMetricSpace { n, table, marks: Vec::new(), scale: 1.0 })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let table = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::from_table(n, table)
    }

    /// Appends a mark; marks keep insertion order.
    pub fn with_mark(mut self, name: &str, point: usize) -> Result<Self> {
        if point >= self.n {
            return Err(Error::UnknownVertex(point));
        }
        self.marks.push((name.to_string(), point));
        Ok(self)
    }

    /// Same space with all distances multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor > 0.0 && factor.is_finite(), "scale must be positive");
        FiniteMetricSpace { scale: self.scale * factor, ..self.clone() }
    }

    pub fn try_scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(param(format!("scale must be positive, got {factor}")));
        }
        Ok(self.scaled(factor))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn marks(&self) -> &[(String, usize)] {
        &self.marks
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.table[i * self.n + j] * self.scale
    }

    pub fn diameter(&self) -> f64 {
        self.table.iter().fold(0.0, |a: f64, &b| a.max(b)) * self.scale
    }

    /// Restriction to `points`, renumbered in the given order; marks outside
    /// the subset are dropped.
    pub fn subspace(&self, points: &[usize]) -> Result<Self> {
        if let Some(&p) = points.iter().find(|&&p| p >= self.n) {
            return Err(Error::UnknownVertex(p));
        }
        let m = points.len();
        let table = (0..m * m).map(|k| self.table[points[k / m] * self.n + points[k % m]]).collect();
        let mut sub = Self::from_table(m, table)?;
        sub.scale = self.scale;
        for (name, p) in &self.marks {
            if let Some(i) = points.iter().position(|q| q == p) {
                sub.marks.push((name.clone(), i));
            }
        }
        Ok(sub)
    }

    fn triangle_ok(&self, a: usize, b: usize, c: usize) -> bool {
        let tol = 1e-9 * (1.0 + self.diameter());
        self.dist(a, c) <= self.dist(a, b) + self.dist(b, c) + tol
    }

    /// Exhaustive check over all ordered triples.
    pub fn satisfies_triangle_inequality(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| (0..self.n).all(|c| self.triangle_ok(a, b, c))))
    }

    /// Check on `samples` random triples, for large spaces.
    pub fn triangle_inequality_sampled<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> bool {
        if self.n == 0 {
            return true;
        }
        (0..samples).all(|_| {
            let (a, b, c) = (rng.random_range(0..self.n), rng.random_range(0..self.n), rng.random_range(0..self.n));
            self.triangle_ok(a, b, c)
        })
    }

    /// Header `# marks: name=id ...`, then `i,j,distance` for `i < j`.
    pub fn to_csv(&self) -> String {
        let marks: Vec<String> = self.marks.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let mut out = format!("# points: {}\n# marks: {}\ni,j,distance\n", self.n, marks.join(" "));
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push_str(&format!("{i},{j},{}\n", self.dist(i, j)));
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |line: usize, m: &str| Error::Parse { position: line, message: m.to_string() };
        let mut n = None;
        let mut marks = Vec::new();
        let mut entries = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("# points:") {
                n = Some(rest.trim().parse::<usize>().map_err(|_| bad(ln, "point count"))?);
            } else if let Some(rest) = line.strip_prefix("# marks:") {
                for tok in rest.split_whitespace() {
                    let (k, v) = tok.split_once('=').ok_or_else(|| bad(ln, "mark must be name=id"))?;
                    marks.push((k.to_string(), v.parse::<usize>().map_err(|_| bad(ln, "mark id"))?));
                }
            } else if line.is_empty() || line.starts_with('#') || line == "i,j,distance" {
                continue;
            } else {
                let f: Vec<&str> = line.split(',').collect();
                if f.len() != 3 {
                    return Err(bad(ln, "expected i,j,distance"));
                }
                let i = f[0].parse::<usize>().map_err(|_| bad(ln, "row index"))?;
                let j = f[1].parse::<usize>().map_err(|_| bad(ln, "column index"))?;
                let d = f[2].parse::<f64>().map_err(|_| bad(ln, "distance"))?;
                entries.push((i, j, d));
            }
        }
        let n = n.ok_or_else(|| bad(0, "missing '# points:' header"))?;
        let mut table = vec![0.0; n * n];
        for (i, j, d) in entries {
            if i >= n || j >= n {
                return Err(Error::UnknownVertex(i.max(j)));
            }
            table[i * n + j] = d;
            table[j * n + i] = d;
        }
        let mut space = Self::from_table(n, table)?;
        for (k, v) in marks {
            space = space.with_mark(&k, v)?;
        }
        Ok(space)
    }
}

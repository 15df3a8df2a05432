//! Network data model: adjacency matrices, actor covariates, ingestion,
//! symmetrization, and descriptive statistics.
//!
//! Networks are binary, undirected, and loop-free. Storage is a dense
//! `N x N` byte matrix; at the scales this crate targets (a few hundred
//! actors) dense storage is the simple, cache-friendly choice.

use crate::error::{Error, Result};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Rule for collapsing an asymmetric 0/1 matrix into an undirected network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetrizeRule {
    /// Tie present if either direction reports it (strongest relation).
    Max,
    /// Tie present only if both directions report it.
    Min,
}

impl std::str::FromStr for SymmetrizeRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(SymmetrizeRule::Max),
            "min" => Ok(SymmetrizeRule::Min),
            other => Err(Error::validation(format!(
                "unknown symmetrize rule '{other}' (expected 'max' or 'min')"
            ))),
        }
    }
}

/// Input format of a network file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NetworkFormat {
    /// Decide from the file shape: a square grid of 0/1 fields is a matrix,
    /// anything else an edge list.
    #[default]
    Auto,
    Matrix,
    EdgeList,
}

/// Symmetric 0/1 adjacency matrix with zero diagonal.
///
/// Actor labels are preserved from the input and used in all outputs;
/// internal indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<u8>, // row-major n*n
    labels: Vec<String>,
}

impl AdjacencyMatrix {
    /// Build from dense rows, validating symmetry, binarity, zero diagonal,
    /// and `n >= 2`. `labels` defaults to 1-based index strings.
    pub fn from_rows(rows: &[Vec<u8>], labels: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::validation(format!(
                "network needs at least 2 actors, got {n}"
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::validation(format!(
                    "ragged matrix: row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
        }
        let mut entries = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                let v = rows[i][j];
                if v > 1 {
                    return Err(Error::validation(format!(
                        "non-binary entry {v} at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
                if i == j && v != 0 {
                    return Err(Error::validation(format!(
                        "self-loop at actor {} (diagonal must be zero)",
                        i + 1
                    )));
                }
                if rows[j][i] != v {
                    return Err(Error::validation(format!(
                        "asymmetric entries at ({},{}) -- pass a symmetrize rule to collapse a directed matrix",
                        i + 1,
                        j + 1
                    )));
                }
                entries[i * n + j] = v;
            }
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != n {
                    return Err(Error::validation(format!(
                        "{} labels for {} actors",
                        l.len(),
                        n
                    )));
                }
                l
            }
            None => default_labels(n),
        };
        Ok(AdjacencyMatrix { n, entries, labels })
    }

    pub fn n_actors(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edge(i, j) == 1
    }

    /// Row `i` of the matrix.
    #[inline]
    pub fn row(&self, i: usize) -> &[u8] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of undirected edges (upper-triangle count).
    pub fn n_edges(&self) -> usize {
        let mut e = 0usize;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                e += self.edge(i, j) as usize;
            }
        }
        e
    }

    /// Number of unordered dyads, `n(n-1)/2`.
    pub fn n_dyads(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|&v| v as usize).sum()
    }

    /// Loop-free complement: every off-diagonal entry flipped.
    pub fn complement(&self) -> AdjacencyMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    out.entries[i * self.n + j] = 1 - self.entries[i * self.n + j];
                }
            }
        }
        out
    }

    /// Canonical matrix serialization: one row per line, comma-separated 0/1.
    pub fn to_matrix_string(&self) -> String {
        let mut out = String::with_capacity(self.n * self.n * 2);
        for i in 0..self.n {
            let row: Vec<&str> = self.row(i).iter().map(|&v| if v == 1 { "1" } else { "0" }).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Canonical edge-list serialization: `from,to` header, one edge per
    /// line, endpoints and lines sorted by label so the form is stable
    /// under reloading (index order is not preserved by an edge list).
    ///
    /// Isolated actors do not appear; the matrix format is lossless.
    pub fn to_edge_list_string(&self) -> String {
        let mut edges: Vec<(&str, &str)> = Vec::with_capacity(self.n_edges());
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has_edge(i, j) {
                    let (a, b) = (self.labels[i].as_str(), self.labels[j].as_str());
                    edges.push(if a <= b { (a, b) } else { (b, a) });
                }
            }
        }
        edges.sort_unstable();
        let mut out = String::from("from,to\n");
        for (a, b) in edges {
            out.push_str(&format!("{a},{b}\n"));
        }
        out
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// Collapse a square 0/1 matrix (zero diagonal, possibly asymmetric) into an
/// undirected network using `rule`.
pub fn symmetrize(raw: &[Vec<u8>], rule: SymmetrizeRule) -> Result<AdjacencyMatrix> {
    let n = raw.len();
    for (i, row) in raw.iter().enumerate() {
        if row.len() != n {
            return Err(Error::validation(format!(
                "non-square input: row {} has {} entries, expected {}",
                i + 1,
                row.len(),
                n
            )));
        }
    }
    let mut rows = vec![vec![0u8; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let v = match rule {
                SymmetrizeRule::Max => raw[i][j].max(raw[j][i]),
                SymmetrizeRule::Min => raw[i][j].min(raw[j][i]),
            };
            rows[i][j] = v;
        }
    }
    AdjacencyMatrix::from_rows(&rows, None)
}

/// Parse the plain-text matrix format: one row per line, comma-separated
/// 0/1 fields, no header. With a symmetrize rule, directed input is
/// collapsed; without one, asymmetric input is an error.
pub fn parse_matrix(text: &str, rule: Option<SymmetrizeRule>) -> Result<AdjacencyMatrix> {
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let field = field.trim();
            match field {
                "0" => row.push(0),
                "1" => row.push(1),
                _ => {
                    return Err(Error::parse(
                        lineno + 1,
                        format!("expected 0 or 1, got '{field}'"),
                    ))
                }
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::parse(1, "empty matrix file"));
    }
    let n = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::parse(
                i + 1,
                format!("ragged row: {} entries, expected {}", row.len(), n),
            ));
        }
        if row[i] != 0 {
            return Err(Error::parse(i + 1, "self-loop entry on the diagonal"));
        }
    }
    match rule {
        Some(r) => symmetrize(&rows, r),
        None => AdjacencyMatrix::from_rows(&rows, None),
    }
}

/// Parse the edge-list format: two columns of actor labels, comma- or
/// whitespace-separated, optional `from,to` header. Actor order follows
/// first appearance; edges are undirected.
pub fn parse_edge_list(text: &str) -> Result<AdjacencyMatrix> {
    let mut labels: Vec<String> = Vec::new();
    let mut index = std::collections::HashMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut intern = |label: &str, labels: &mut Vec<String>| -> usize {
        *index.entry(label.to_string()).or_insert_with(|| {
            labels.push(label.to_string());
            labels.len() - 1
        })
    };
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = if line.contains(',') {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        if lineno == 0 && fields.len() == 2 && fields[0] == "from" && fields[1] == "to" {
            continue;
        }
        if fields.len() != 2 {
            return Err(Error::parse(
                lineno + 1,
                format!("expected 2 columns, got {}", fields.len()),
            ));
        }
        let i = intern(fields[0], &mut labels);
        let j = intern(fields[1], &mut labels);
        if i == j {
            return Err(Error::parse(
                lineno + 1,
                format!("self-loop on actor '{}'", fields[0]),
            ));
        }
        edges.push((i, j));
    }
    let n = labels.len();
    if n < 2 {
        return Err(Error::validation(format!(
            "edge list names {n} actors, need at least 2"
        )));
    }
    let mut rows = vec![vec![0u8; n]; n];
    for (i, j) in edges {
        rows[i][j] = 1;
        rows[j][i] = 1;
    }
    AdjacencyMatrix::from_rows(&rows, Some(labels))
}

/// Load a network from text, dispatching on `format`.
///
/// `Auto` treats a square grid of 0/1 fields as a matrix and anything else
/// as an edge list. The symmetrize rule only applies to matrix input.
pub fn load_network(
    text: &str,
    format: NetworkFormat,
    rule: Option<SymmetrizeRule>,
) -> Result<AdjacencyMatrix> {
    match format {
        NetworkFormat::Matrix => parse_matrix(text, rule),
        NetworkFormat::EdgeList => parse_edge_list(text),
        NetworkFormat::Auto => {
            if looks_like_matrix(text) {
                parse_matrix(text, rule)
            } else {
                parse_edge_list(text)
            }
        }
    }
}

fn looks_like_matrix(text: &str) -> bool {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let n = lines.len();
    if n < 2 {
        return false;
    }
    lines.iter().all(|line| {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        fields.len() == n && fields.iter().all(|f| *f == "0" || *f == "1")
    })
}

/// Fraction of present ties over all possible ties.
pub fn density(net: &AdjacencyMatrix) -> f64 {
    net.n_edges() as f64 / net.n_dyads() as f64
}

/// Per-actor covariate and outcome, aligned with the network's actor order.
#[derive(Debug, Clone, PartialEq)]
pub struct ActorData {
    pub ids: Vec<String>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ActorData {
    pub fn new(ids: Vec<String>, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if ids.len() != x.len() || x.len() != y.len() {
            return Err(Error::validation(format!(
                "actor data columns disagree: {} ids, {} x, {} y",
                ids.len(),
                x.len(),
                y.len()
            )));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::validation("non-finite value in actor data"));
        }
        Ok(ActorData { ids, x, y })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// True if every outcome is exactly 0 or 1.
    pub fn y_is_binary(&self) -> bool {
        self.y.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    /// Parse the `id,x,y` CSV (header required). Row order defines actor
    /// index order and must match the network's order.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let header = loop {
            match lines.next() {
                Some((_, l)) if l.trim().is_empty() => continue,
                Some((no, l)) => break (no, l),
                None => return Err(Error::parse(1, "empty actor file")),
            }
        };
        let cols: Vec<&str> = header.1.split(',').map(str::trim).collect();
        if cols != ["id", "x", "y"] {
            return Err(Error::parse(
                header.0 + 1,
                format!("expected header 'id,x,y', got '{}'", header.1.trim()),
            ));
        }
        let mut ids = Vec::new();
        let mut x = Vec::new();
        let mut y = Vec::new();
        for (lineno, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::parse(
                    lineno + 1,
                    format!("expected 3 columns, got {}", fields.len()),
                ));
            }
            ids.push(fields[0].to_string());
            x.push(parse_f64(fields[1], lineno + 1, "x")?);
            y.push(parse_f64(fields[2], lineno + 1, "y")?);
        }
        ActorData::new(ids, x, y)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,x,y\n");
        for i in 0..self.len() {
            out.push_str(&format!("{},{},{}\n", self.ids[i], self.x[i], self.y[i]));
        }
        out
    }
}

fn parse_f64(field: &str, line: usize, name: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| Error::parse(line, format!("bad {name} value '{field}'")))
}

/// Point-biserial correlation of a continuous variable with a 0/1 indicator,
/// with its two-sided t-test p-value (`df = n - 2`).
///
/// This is the product-moment correlation evaluated on the 0/1 coding.
pub fn point_biserial(continuous: &[f64], binary: &[f64]) -> Result<(f64, f64)> {
    let n = continuous.len();
    if n != binary.len() {
        return Err(Error::validation(format!(
            "length mismatch: {} continuous vs {} binary",
            n,
            binary.len()
        )));
    }
    if n < 3 {
        return Err(Error::validation("point-biserial needs at least 3 actors"));
    }
    if binary.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::validation("binary vector has entries outside {0,1}"));
    }
    let ones = binary.iter().filter(|&&v| v == 1.0).count();
    if ones == 0 || ones == n {
        return Err(Error::validation("binary vector is constant"));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let mx = mean(continuous);
    let my = mean(binary);
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        let dx = continuous[i] - mx;
        let dy = binary[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx <= 0.0 {
        return Err(Error::validation("continuous vector is constant"));
    }
    let r = sxy / (sxx * syy).sqrt();
    let r = r.clamp(-1.0, 1.0);
    let df = (n - 2) as f64;
    let p = if 1.0 - r * r <= f64::EPSILON {
        0.0
    } else {
        let t = r.abs() * (df / (1.0 - r * r)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df)
            .map_err(|e| Error::Numerical(format!("t distribution: {e}")))?;
        2.0 * (1.0 - dist.cdf(t))
    };
    Ok((r, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn net3() -> AdjacencyMatrix {
        AdjacencyMatrix::from_rows(
            &[vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn matrix_read_back() {
        let net = parse_matrix("0,1,0\n1,0,1\n0,1,0\n", None).unwrap();
        assert_eq!(net.n_actors(), 3);
        assert_eq!(net.n_edges(), 2);
        assert_eq!(net, net3());
    }

    #[test]
    fn edge_list_matches_matrix() {
        let net = parse_edge_list("1,2\n2,3\n").unwrap();
        assert_eq!(net.n_actors(), 3);
        assert_eq!(net.n_edges(), 2);
        assert_eq!(net.to_matrix_string(), net3().to_matrix_string());
        assert_eq!(net.labels(), &["1", "2", "3"]);
    }

    #[test]
    fn edge_list_with_header_and_whitespace() {
        let net = parse_edge_list("from,to\na b\nb c\n").unwrap();
        assert_eq!(net.n_actors(), 3);
        assert_eq!(net.labels(), &["a", "b", "c"]);
    }

    #[test]
    fn symmetrize_max_keeps_strongest_relation() {
        let raw = vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 0]];
        let net = symmetrize(&raw, SymmetrizeRule::Max).unwrap();
        assert_eq!(net.edge(0, 1), 1);
        assert_eq!(net.edge(1, 0), 1);
        let via_loader = parse_matrix("0,1,0\n0,0,0\n0,0,0\n", Some(SymmetrizeRule::Max)).unwrap();
        assert_eq!(net, via_loader);
    }

    #[test]
    fn symmetrize_min_drops_one_sided_ties() {
        let raw = vec![vec![0, 1], vec![0, 0]];
        let net = symmetrize(&raw, SymmetrizeRule::Min).unwrap();
        assert_eq!(net.n_edges(), 0);
    }

    #[test]
    fn symmetrize_is_idempotent_on_symmetric_input() {
        let mut rng = crate::rng::stream(11, 9);
        for _ in 0..25 {
            let n = rng.random_range(2..12usize);
            let mut rows = vec![vec![0u8; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = u8::from(rng.random::<f64>() < 0.4);
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            for rule in [SymmetrizeRule::Max, SymmetrizeRule::Min] {
                let once = symmetrize(&rows, rule).unwrap();
                let rows2: Vec<Vec<u8>> = (0..n).map(|i| once.row(i).to_vec()).collect();
                let twice = symmetrize(&rows2, rule).unwrap();
                assert_eq!(once, twice);
            }
        }
    }

    #[test]
    fn asymmetric_without_rule_is_rejected() {
        let err = parse_matrix("0,1\n0,0\n", None).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn malformed_matrices_are_rejected() {
        assert!(parse_matrix("0,2\n2,0\n", None).is_err()); // non-binary
        assert!(parse_matrix("0,1\n1\n", None).is_err()); // ragged
        assert!(parse_matrix("1,1\n1,0\n", None).is_err()); // self-loop
        assert!(parse_edge_list("a,a\n").is_err()); // self-loop edge
    }

    #[test]
    fn density_extremes() {
        let complete = AdjacencyMatrix::from_rows(
            &[
                vec![0, 1, 1, 1],
                vec![1, 0, 1, 1],
                vec![1, 1, 0, 1],
                vec![1, 1, 1, 0],
            ],
            None,
        )
        .unwrap();
        assert_eq!(density(&complete), 1.0);
        let empty =
            AdjacencyMatrix::from_rows(&[vec![0, 0], vec![0, 0]], None).unwrap();
        assert_eq!(density(&empty), 0.0);
    }

    #[test]
    fn density_complement_sums_to_one() {
        let mut rng = crate::rng::stream(5, 9);
        for _ in 0..20 {
            let n = rng.random_range(2..15usize);
            let mut rows = vec![vec![0u8; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = u8::from(rng.random::<f64>() < 0.3);
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            let net = AdjacencyMatrix::from_rows(&rows, None).unwrap();
            let d = density(&net);
            assert!((0.0..=1.0).contains(&d));
            assert!((d + density(&net.complement()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn round_trip_both_formats() {
        let mut rng = crate::rng::stream(23, 9);
        for case in 0..30 {
            let n = rng.random_range(2..12usize);
            let mut rows = vec![vec![0u8; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = u8::from(rng.random::<f64>() < 0.5);
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            let net = AdjacencyMatrix::from_rows(&rows, None).unwrap();

            let matrix_text = net.to_matrix_string();
            let reloaded = load_network(&matrix_text, NetworkFormat::Auto, None).unwrap();
            assert_eq!(net, reloaded, "matrix round trip, case {case}");
            assert_eq!(matrix_text, reloaded.to_matrix_string());

            // Edge-list round trip only reconstructs actors that have ties.
            if (0..n).all(|i| net.degree(i) > 0) {
                let el = net.to_edge_list_string();
                let back = load_network(&el, NetworkFormat::EdgeList, None).unwrap();
                // Same label set, same edges (order of first appearance may differ).
                assert_eq!(back.n_edges(), net.n_edges());
                let mut expect: Vec<(String, String)> = Vec::new();
                for i in 0..n {
                    for j in (i + 1)..n {
                        if net.has_edge(i, j) {
                            expect.push((net.labels()[i].clone(), net.labels()[j].clone()));
                        }
                    }
                }
                for (a, b) in expect {
                    let ia = back.labels().iter().position(|l| *l == a).unwrap();
                    let ib = back.labels().iter().position(|l| *l == b).unwrap();
                    assert!(back.has_edge(ia, ib));
                }
                assert_eq!(el, back.to_edge_list_string());
            }
        }
    }

    #[test]
    fn auto_detects_edge_lists() {
        // Two lines, non-square: must be an edge list.
        let net = load_network("5,7\n7,9\n", NetworkFormat::Auto, None).unwrap();
        assert_eq!(net.n_actors(), 3);
    }

    #[test]
    fn actor_csv_round_trip() {
        let text = "id,x,y\ns1,0.5,1\ns2,-0.25,0\ns3,1.75,1\n";
        let data = ActorData::from_csv(text).unwrap();
        assert_eq!(data.len(), 3);
        assert_eq!(data.ids, vec!["s1", "s2", "s3"]);
        assert!(data.y_is_binary());
        assert_eq!(data.to_csv(), text);
        assert!(ActorData::from_csv("id,x\n1,2\n").is_err());
        assert!(ActorData::from_csv("id,x,y\n1,abc,0\n").is_err());
    }

    #[test]
    fn point_biserial_perfect_association() {
        let b = vec![0.0, 1.0, 0.0, 1.0, 1.0];
        let (r, p) = point_biserial(&b, &b).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        assert_eq!(p, 0.0);
    }

    #[test]
    fn point_biserial_independent_is_near_zero() {
        // Monte Carlo: 1e5 independent pairs.
        let mut rng = crate::rng::stream(2024, 9);
        let n = 100_000;
        let mut cont = Vec::with_capacity(n);
        let mut bin = Vec::with_capacity(n);
        for _ in 0..n {
            cont.push(rng.random::<f64>() * 2.0 - 1.0);
            bin.push(f64::from(rng.random::<f64>() < 0.5));
        }
        let (r, p) = point_biserial(&cont, &bin).unwrap();
        assert!(r.abs() < 0.01, "expected near-zero correlation, got {r}");
        assert!(p > 0.0);
    }

    #[test]
    fn point_biserial_matches_pearson_oracle() {
        // Groups {0: (1,2)}, {1: (3,4)}; oracle is the Pearson formula
        // computed from scratch on the four points.
        let cont = vec![1.0, 2.0, 3.0, 4.0];
        let bin = vec![0.0, 0.0, 1.0, 1.0];
        let mx = 2.5;
        let my = 0.5;
        let mut sxx = 0.0f64;
        let mut syy = 0.0f64;
        let mut sxy = 0.0f64;
        for i in 0..4 {
            sxy += (cont[i] - mx) * (bin[i] - my);
            sxx += (cont[i] - mx) * (cont[i] - mx);
            syy += (bin[i] - my) * (bin[i] - my);
        }
        let oracle = sxy / (sxx * syy).sqrt();
        let (r, p) = point_biserial(&cont, &bin).unwrap();
        assert!((r - oracle).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn point_biserial_rejects_degenerate_inputs() {
        assert!(point_biserial(&[1.0, 2.0, 3.0], &[0.0, 0.0, 0.0]).is_err());
        assert!(point_biserial(&[1.0, 1.0, 1.0], &[0.0, 1.0, 0.0]).is_err());
        assert!(point_biserial(&[1.0, 2.0], &[0.0, 1.0]).is_err());
    }
}

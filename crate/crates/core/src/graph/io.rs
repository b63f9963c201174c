//! Edge-list and GML loaders.
//!
//! Both loaders map node labels to dense IDs, drop self-loops and repeated
//! pairs, and remove nodes left without any edge.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ordered, Graph};
use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    #[serde(alias = "edge-list")]
    EdgeList,
    Gml,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "edgelist" | "edge-list" | "edges" | "txt" => Ok(GraphFormat::EdgeList),
            "gml" => Ok(GraphFormat::Gml),
            other => Err(Error::InvalidArgument(format!(
                "unknown graph format `{other}`"
            ))),
        }
    }
}

impl fmt::Display for GraphFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFormat::EdgeList => f.write_str("edgelist"),
            GraphFormat::Gml => f.write_str("gml"),
        }
    }
}

impl GraphFormat {
    pub fn from_path(path: &Path) -> GraphFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("gml") => GraphFormat::Gml,
            _ => GraphFormat::EdgeList,
        }
    }
}

/// A loaded graph with its original node labels and, when the file carries
/// them, ground-truth communities.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub graph: Graph,
    pub labels: Vec<String>,
    pub ground_truth: Option<Partition>,
}

pub fn load_edge_list(path: &Path, format: GraphFormat) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    match format {
        GraphFormat::EdgeList => parse_edge_list(&text, path),
        GraphFormat::Gml => parse_gml(&text, path),
    }
}

pub fn parse_edge_list(text: &str, origin: &Path) -> Result<Dataset> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line: i + 1,
                message: format!("expected two endpoints, found {} fields", tokens.len()),
            });
        }
        pairs.push((tokens[0].to_string(), tokens[1].to_string()));
    }
    build_dataset(pairs, &HashMap::new())
}

/// Assembles a dataset from labelled endpoint pairs. `values` optionally maps
/// node labels to community labels.
fn build_dataset(
    pairs: Vec<(String, String)>,
    values: &HashMap<String, String>,
) -> Result<Dataset> {
    let mut used: BTreeSet<&str> = BTreeSet::new();
    for (a, b) in &pairs {
        if a != b {
            used.insert(a);
            used.insert(b);
        }
    }
    let mut labels: Vec<String> = used.iter().map(|s| s.to_string()).collect();
    if labels.iter().all(|l| l.parse::<i64>().is_ok()) {
        labels.sort_by_key(|l| l.parse::<i64>().unwrap());
    }
    if labels.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let ids: HashMap<&str, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mut edges: Vec<(usize, usize)> = pairs
        .iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| ordered(ids[a.as_str()], ids[b.as_str()]))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let graph = Graph::from_sorted_unchecked(labels.len(), edges);

    let ground_truth = if !values.is_empty() && labels.iter().all(|l| values.contains_key(l)) {
        let comm: Vec<&String> = labels.iter().map(|l| &values[l]).collect();
        Some(Partition::from_labels(&comm))
    } else {
        None
    };
    Ok(Dataset {
        graph,
        labels,
        ground_truth,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Str(String),
    Word(String),
}

fn tokenize(text: &str, origin: &Path) -> Result<Vec<(Token, usize)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '[' => {
                out.push((Token::Open, line));
                chars.next();
            }
            ']' => {
                out.push((Token::Close, line));
                chars.next();
            }
            '"' => {
                let start = line;
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            s.push(c);
                        }
                        None => {
                            return Err(parse_error(origin, start, "unterminated string"));
                        }
                    }
                }
                out.push((Token::Str(s), start));
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '[' || c == ']' || c == '"' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                out.push((Token::Word(s), line));
            }
        }
    }
    Ok(out)
}

fn parse_error(origin: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: PathBuf::from(origin),
        line,
        message: message.into(),
    }
}

#[derive(Debug)]
enum Value {
    Scalar(String),
    List(Vec<(String, Value, usize)>),
}

struct GmlParser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    origin: &'a Path,
}

impl GmlParser<'_> {
    fn line(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map_or(1, |t| t.1)
    }

    /// Parses `key value` pairs until a closing bracket (or end of input at
    /// the top level).
    fn list(&mut self, nested: bool) -> Result<Vec<(String, Value, usize)>> {
        let mut items = Vec::new();
        loop {
            let Some((tok, line)) = self.tokens.get(self.pos).cloned() else {
                if nested {
                    return Err(parse_error(self.origin, self.line(), "missing `]`"));
                }
                return Ok(items);
            };
            self.pos += 1;
            let key = match tok {
                Token::Close if nested => return Ok(items),
                Token::Word(w) => w,
                other => {
                    return Err(parse_error(
                        self.origin,
                        line,
                        format!("expected a key, found {other:?}"),
                    ))
                }
            };
            let Some((tok, vline)) = self.tokens.get(self.pos).cloned() else {
                return Err(parse_error(
                    self.origin,
                    line,
                    format!("key `{key}` has no value"),
                ));
            };
            self.pos += 1;
            let value = match tok {
                Token::Open => Value::List(self.list(true)?),
                Token::Str(s) | Token::Word(s) => Value::Scalar(s),
                Token::Close => {
                    return Err(parse_error(
                        self.origin,
                        vline,
                        format!("key `{key}` has no value"),
                    ))
                }
            };
            items.push((key, value, line));
        }
    }
}

/// Parses the GML subset `graph [ node [ id .. label .. value .. ] edge [
/// source .. target .. ] ]`. A node's `value`, when every node has one, is
/// read as its ground-truth community.
pub fn parse_gml(text: &str, origin: &Path) -> Result<Dataset> {
    let tokens = tokenize(text, origin)?;
    let mut parser = GmlParser {
        tokens,
        pos: 0,
        origin,
    };
    let top = parser.list(false)?;
    let graph_items = top
        .into_iter()
        .find_map(|(k, v, _)| match (k.as_str(), v) {
            ("graph", Value::List(items)) => Some(items),
            _ => None,
        })
        .ok_or_else(|| parse_error(origin, 1, "no `graph [ ... ]` block"))?;

    let mut declared: HashMap<String, Option<String>> = HashMap::new();
    let mut pairs = Vec::new();
    for (key, value, line) in graph_items {
        match (key.as_str(), value) {
            ("node", Value::List(fields)) => {
                let mut id = None;
                let mut community = None;
                for (k, v, _) in fields {
                    if let Value::Scalar(s) = v {
                        match k.as_str() {
                            "id" => id = Some(s),
                            "value" => community = Some(s),
                            _ => {}
                        }
                    }
                }
                let id = id.ok_or_else(|| parse_error(origin, line, "node without `id`"))?;
                if declared.insert(id.clone(), community).is_some() {
                    return Err(parse_error(
                        origin,
                        line,
                        format!("node id {id} declared twice"),
                    ));
                }
            }
            ("edge", Value::List(fields)) => {
                let mut source = None;
                let mut target = None;
                for (k, v, _) in fields {
                    if let Value::Scalar(s) = v {
                        match k.as_str() {
                            "source" => source = Some(s),
                            "target" => target = Some(s),
                            _ => {}
                        }
                    }
                }
                match (source, target) {
                    (Some(s), Some(t)) => {
                        for end in [&s, &t] {
                            if !declared.contains_key(end) {
                                return Err(parse_error(
                                    origin,
                                    line,
                                    format!("edge references undeclared node {end}"),
                                ));
                            }
                        }
                        pairs.push((s, t));
                    }
                    _ => {
                        return Err(parse_error(
                            origin,
                            line,
                            "edge needs `source` and `target`",
                        ))
                    }
                }
            }
            ("directed", Value::Scalar(s)) if s != "0" => {
                return Err(parse_error(
                    origin,
                    line,
                    "directed graphs are not supported",
                ));
            }
            _ => {}
        }
    }
    let values: HashMap<String, String> = declared
        .into_iter()
        .filter_map(|(id, v)| v.map(|v| (id, v)))
        .collect();
    build_dataset(pairs, &values)
}

/// Writes `graph` as a whitespace-separated edge list.
pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    for &(u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Writes `graph` as GML. Community IDs from `ground_truth` become node
/// `value` attributes.
pub fn write_gml<W: Write>(
    graph: &Graph,
    ground_truth: Option<&Partition>,
    mut out: W,
) -> Result<()> {
    writeln!(out, "graph [")?;
    for v in 0..graph.node_count() {
        match ground_truth {
            Some(p) => writeln!(
                out,
                "  node [ id {v} label \"{v}\" value {} ]",
                p.community_of(v)
            )?,
            None => writeln!(out, "  node [ id {v} label \"{v}\" ]")?,
        }
    }
    for &(u, v) in graph.edges() {
        writeln!(out, "  edge [ source {u} target {v} ]")?;
    }
    writeln!(out, "]")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("<test>")
    }

    #[test]
    fn edge_list_basic() {
        let d = parse_edge_list("0 1\n1 2", p()).unwrap();
        assert_eq!(d.graph.node_count(), 3);
        assert_eq!(d.graph.edge_count(), 2);
    }

    #[test]
    fn edge_list_dedups_and_drops_loops() {
        let d = parse_edge_list("0 1\n1 0\n", p()).unwrap();
        assert_eq!((d.graph.node_count(), d.graph.edge_count()), (2, 1));
        // node 7 only has a self-loop and disappears
        let d = parse_edge_list("# comment\n3 4\n7 7\n\n4 5\n", p()).unwrap();
        assert_eq!(d.labels, vec!["3", "4", "5"]);
        assert_eq!(d.graph.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn edge_list_string_labels() {
        let d = parse_edge_list("alice bob\nbob carol\n", p()).unwrap();
        assert_eq!(d.labels, vec!["alice", "bob", "carol"]);
        assert!(d.ground_truth.is_none());
    }

    #[test]
    fn edge_list_errors() {
        match parse_edge_list("0 1\n2\n", p()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_edge_list("# nothing\n", p()),
            Err(Error::EmptyGraph)
        ));
        assert!(matches!(
            parse_edge_list("1 1\n", p()),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn gml_with_values() {
        let text = r#"
Creator "test"
graph
[
  directed 0
  node [ id 10 label "A" value 0 ]
  node [ id 11 label "B" value 0 ]
  node [ id 12 label "C" value 1 ]
  node [ id 13 label "lonely" value 1 ]
  edge [ source 10 target 11 ]
  edge [ source 11 target 12 ]
  edge [ source 12 target 11 ]
]
"#;
        let d = parse_gml(text, p()).unwrap();
        assert_eq!(d.graph.node_count(), 3);
        assert_eq!(d.graph.edge_count(), 2);
        assert_eq!(d.ground_truth.unwrap().assignment(), &[0, 0, 1]);
    }

    #[test]
    fn gml_errors_carry_lines() {
        let text = "graph [\n node [ id 0 ]\n edge [ source 0 ]\n]";
        match parse_gml(text, p()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_gml("graph [ node [ id 0 ]", p()).is_err());
        assert!(parse_gml("graph [ node [ id 0 label \"x ]", p()).is_err());
    }
}

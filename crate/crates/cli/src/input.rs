use std::fs;
use std::path::Path;

use matdens::demo::{figure1, EdgeStyle};
use matdens::rational;
use matdens::{descriptor, Error, Graph, MatroidHandle, Result, WeightVector};

use crate::{Demo, Source};

/// A loaded matroid with its weights and, for graph inputs, the graph.
#[derive(Clone, Debug)]
pub struct Instance {
    pub matroid: MatroidHandle,
    pub sigma: WeightVector,
    pub weighted: bool,
    pub graph: Option<Graph>,
    pub styles: Option<Vec<EdgeStyle>>,
}

impl Instance {
    pub fn from_graph(graph: Graph, styles: Option<Vec<EdgeStyle>>) -> Result<Self> {
        let matroid = graph.matroid()?;
        let (sigma, weighted) = match graph.weights() {
            Some(w) => (w, true),
            None => (WeightVector::ones(matroid.len()), false),
        };
        Ok(Instance { matroid, sigma, weighted, graph: Some(graph), styles })
    }

    pub fn require_graph(&self) -> Result<&Graph> {
        self.graph.as_ref().ok_or_else(|| Error::input("this command needs a graph input"))
    }

    pub fn require_unweighted(&self) -> Result<()> {
        if self.weighted {
            return Err(Error::domain("this command is defined for unit weights only"));
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

pub fn parse_weights(text: &str, n: usize) -> Result<WeightVector> {
    let mut vals = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let mut col = 1;
        for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
            if !tok.is_empty() {
                let at = body[col - 1..].find(tok).map_or(col, |p| col + p);
                let v = rational::parse(tok).map_err(|e| Error::Parse {
                    line: i + 1,
                    column: at,
                    message: match e {
                        Error::Input(m) => m,
                        other => other.to_string(),
                    },
                })?;
                vals.push(v);
                col = at + tok.len();
            }
        }
    }
    let w = WeightVector::new(vals)?;
    w.check_len(n)?;
    Ok(w)
}

pub fn load(src: &Source) -> Result<Instance> {
    let mut inst = match (&src.demo, &src.input) {
        (Some(Demo::Figure1), _) => {
            let (g, styles) = figure1();
            Instance::from_graph(g, Some(styles))?
        }
        (None, Some(path)) => {
            let text = read(path)?;
            if text.trim_start().starts_with('{') {
                let parsed = descriptor::parse(&text)?;
                let weighted = parsed.weights.is_some();
                let sigma = parsed.weights.unwrap_or_else(|| WeightVector::ones(parsed.matroid.len()));
                Instance { matroid: parsed.matroid, sigma, weighted, graph: None, styles: None }
            } else {
                Instance::from_graph(Graph::parse_edge_list(&text)?, None)?
            }
        }
        (None, None) => return Err(Error::input("give an input file or --demo")),
    };
    if let Some(path) = &src.weights {
        inst.sigma = parse_weights(&read(path)?, inst.matroid.len())?;
        inst.weighted = !inst.sigma.is_unit();
    }
    Ok(inst)
}

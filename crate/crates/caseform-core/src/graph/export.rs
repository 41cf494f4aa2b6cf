//! Dot and GraphML exports for visualization and exchange.

use super::CausalGraph;

/// Supported export formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    GraphML,
}

impl std::str::FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(ExportFormat::Dot),
            "graphml" => Ok(ExportFormat::GraphML),
            other => Err(format!("unknown export format `{other}` (expected dot or graphml)")),
        }
    }
}

impl CausalGraph {
    pub fn export(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Dot => self.to_dot(),
            ExportFormat::GraphML => self.to_graphml(),
        }
    }

    /// Graphviz Dot rendering: one node statement per factor (with `label`
    /// and `category` attributes), one edge statement per causal link.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("digraph {} {{\n", dot_quote(self.session_id())));
        for node in self.nodes() {
            out.push_str(&format!(
                "  {} [label={}, category={}];\n",
                dot_quote(&node.id),
                dot_quote(&node.label),
                dot_quote(node.category.as_str()),
            ));
        }
        for edge in self.edges() {
            out.push_str(&format!(
                "  {} -> {};\n",
                dot_quote(&edge.source),
                dot_quote(&edge.target)
            ));
        }
        out.push_str("}\n");
        out
    }

    /// GraphML rendering with `label` and `category` declared as node
    /// attribute keys.
    pub fn to_graphml(&self) -> String {
        let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
        out.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
        out.push_str(
            "  <key id=\"category\" for=\"node\" attr.name=\"category\" attr.type=\"string\"/>\n",
        );
        out.push_str(&format!(
            "  <graph id=\"{}\" edgedefault=\"directed\">\n",
            xml_escape(self.session_id())
        ));
        for node in self.nodes() {
            out.push_str(&format!(
                "    <node id=\"{}\">\n      <data key=\"label\">{}</data>\n      <data key=\"category\">{}</data>\n    </node>\n",
                xml_escape(&node.id),
                xml_escape(&node.label),
                node.category.as_str(),
            ));
        }
        for edge in self.edges() {
            out.push_str(&format!(
                "    <edge source=\"{}\" target=\"{}\"/>\n",
                xml_escape(&edge.source),
                xml_escape(&edge.target)
            ));
        }
        out.push_str("  </graph>\n</graphml>\n");
        out
    }
}

fn dot_quote(s: &str) -> String {
    let mut quoted = String::with_capacity(s.len() + 2);
    quoted.push('"');
    for ch in s.chars() {
        match ch {
            '"' => quoted.push_str("\\\""),
            '\\' => quoted.push_str("\\\\"),
            '\n' => quoted.push_str("\\n"),
            other => quoted.push(other),
        }
    }
    quoted.push('"');
    quoted
}

fn xml_escape(s: &str) -> String {
    let mut escaped = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => escaped.push_str("&amp;"),
            '<' => escaped.push_str("&lt;"),
            '>' => escaped.push_str("&gt;"),
            '"' => escaped.push_str("&quot;"),
            '\'' => escaped.push_str("&apos;"),
            other => escaped.push(other),
        }
    }
    escaped
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{CausalEdge, FactorCategory, FactorNode, Origin};

    fn graph(nodes: Vec<FactorNode>, edges: Vec<CausalEdge>) -> CausalGraph {
        CausalGraph::build("s", Origin::Human, None, nodes, edges).unwrap()
    }

    #[test]
    fn empty_dot_has_header_and_no_statements() {
        let g = graph(vec![], vec![]);
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph \"s\" {"));
        assert!(!dot.contains("label="));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn graphml_counts_match() {
        let nodes = vec![
            FactorNode::new("a", "a", FactorCategory::Presenting),
            FactorNode::new("b", "b", FactorCategory::Perpetuating),
            FactorNode::new("c", "c", FactorCategory::Precipitating),
        ];
        let edges = vec![CausalEdge::new("a", "b"), CausalEdge::new("b", "c")];
        let g = graph(nodes, edges);
        let xml = g.to_graphml();
        assert_eq!(xml.matches("<node id=").count(), 3);
        assert_eq!(xml.matches("<edge source=").count(), 2);
        assert!(xml.contains("attr.name=\"category\""));
    }

    #[test]
    fn dot_contains_edge_statements() {
        let nodes = vec![
            FactorNode::new("addiction", "addiction", FactorCategory::Presenting),
            FactorNode::new(
                "repeated-heroin-use",
                "repeated heroin use",
                FactorCategory::Perpetuating,
            ),
        ];
        let edges = vec![CausalEdge::new("repeated-heroin-use", "addiction")];
        let g = graph(nodes, edges);
        assert!(g
            .to_dot()
            .contains("\"repeated-heroin-use\" -> \"addiction\";"));
    }

    #[test]
    fn labels_are_escaped() {
        let nodes = vec![FactorNode::new("a", "says \"no\" & <quits>", FactorCategory::Presenting)];
        let g = graph(nodes, vec![]);
        assert!(g.to_dot().contains("\\\"no\\\""));
        assert!(g.to_graphml().contains("&quot;no&quot; &amp; &lt;quits&gt;"));
    }
}

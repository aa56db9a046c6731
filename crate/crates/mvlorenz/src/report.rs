//! Per-population inequality reports, the cross-population dominance partial
//! order with Hasse-diagram output, and surface export for plotting.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::estimator::{megc, pseudo_observations, MeilcSurface};
use crate::lorenz::{gini, GiniConvention};
use crate::numeric::{fmt_full, KahanSum};

/// Midpoint ranks under weights: a tie group spanning cumulative weight
/// [a, a+g) ranks at a + g/2. With unit weights this reproduces average
/// ranks up to a constant shift, which correlation ignores.
pub(crate) fn midpoint_ranks(values: &[f64], weights: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut ranks = vec![0.0; n];
    let mut cum = 0.0;
    let mut i = 0;
    while i < n {
        let v = values[order[i]];
        let mut k = i;
        let mut group_w = 0.0;
        while k < n && values[order[k]] == v {
            group_w += weights[order[k]];
            k += 1;
        }
        let rank = cum + group_w / 2.0;
        for &j in &order[i..k] {
            ranks[j] = rank;
        }
        cum += group_w;
        i = k;
    }
    ranks
}

/// Weighted Spearman rank correlation with midpoint ranks for ties.
/// Returns 0 when either column is degenerate (all values tied).
pub fn weighted_spearman(x: &[f64], y: &[f64], weights: &[f64]) -> f64 {
    let rx = midpoint_ranks(x, weights);
    let ry = midpoint_ranks(y, weights);
    let mut total = KahanSum::new();
    let mut mx = KahanSum::new();
    let mut my = KahanSum::new();
    for ((rx, ry), &w) in rx.iter().zip(&ry).zip(weights) {
        total.add(w);
        mx.add(w * rx);
        my.add(w * ry);
    }
    let total = total.total();
    let (mx, my) = (mx.total() / total, my.total() / total);
    let mut num = KahanSum::new();
    let mut dx = KahanSum::new();
    let mut dy = KahanSum::new();
    for ((rx, ry), &w) in rx.iter().zip(&ry).zip(weights) {
        num.add(w * (rx - mx) * (ry - my));
        dx.add(w * (rx - mx) * (rx - mx));
        dy.add(w * (ry - my) * (ry - my));
    }
    let denom = (dx.total() * dy.total()).sqrt();
    if denom == 0.0 {
        0.0
    } else {
        num.total() / denom
    }
}

/// Summary triple of one population: marginal Ginis (trapezoid convention),
/// the multivariate coefficient, rank correlations, and effective size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub entity: String,
    pub marginal_ginis: Vec<f64>,
    pub megc: f64,
    pub spearman_rho: Vec<Vec<f64>>,
    pub n_effective: f64,
}

/// Computes the full report for one dataset.
pub fn report(data: &Dataset, label: &str) -> Result<InequalityReport> {
    let d = data.dim();
    let mut marginal_ginis = Vec::with_capacity(d);
    for c in 0..d {
        marginal_ginis.push(gini(&data.column(c), Some(data.weights()), GiniConvention::Trapezoid)?);
    }
    let coefficient = megc(&pseudo_observations(data));
    let mut spearman_rho = vec![vec![1.0; d]; d];
    for a in 0..d {
        for b in a + 1..d {
            let rho = weighted_spearman(&data.column(a), &data.column(b), data.weights());
            spearman_rho[a][b] = rho;
            spearman_rho[b][a] = rho;
        }
    }
    Ok(InequalityReport {
        entity: label.to_string(),
        marginal_ginis,
        megc: coefficient,
        spearman_rho,
        n_effective: data.total_weight(),
    })
}

/// Directed dominance relation on report triples.
///
/// An edge runs from the more unequal population to the less unequal one:
/// every marginal Gini and the multivariate coefficient weakly larger, at
/// least one strictly. Ties produce no edge, so the graph is acyclic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub reduced: bool,
}

impl DominanceGraph {
    pub fn edge_labels(&self) -> Vec<(&str, &str)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.nodes[a].as_str(), self.nodes[b].as_str()))
            .collect()
    }

    /// Transitive-closure matrix over node indices.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.nodes.len();
        let mut reach = vec![vec![false; n]; n];
        for &(a, b) in &self.edges {
            reach[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    reach[i][j] |= reach[i][k] && reach[k][j];
                }
            }
        }
        reach
    }
}

fn triple(report: &InequalityReport) -> Vec<f64> {
    let mut t = report.marginal_ginis.clone();
    t.push(report.megc);
    t
}

/// Builds the dominance graph; `reduce` applies the transitive reduction for
/// Hasse-diagram form.
pub fn dominance_graph(reports: &[InequalityReport], reduce: bool) -> Result<DominanceGraph> {
    let d = reports.first().map(|r| r.marginal_ginis.len()).unwrap_or(0);
    for r in reports {
        if r.marginal_ginis.len() != d {
            return Err(Error::WrongDimension { expected: d, got: r.marginal_ginis.len() });
        }
    }
    let mut order: Vec<usize> = (0..reports.len()).collect();
    order.sort_by(|&a, &b| reports[a].entity.cmp(&reports[b].entity));
    let nodes: Vec<String> = order.iter().map(|&i| reports[i].entity.clone()).collect();
    let triples: Vec<Vec<f64>> = order.iter().map(|&i| triple(&reports[i])).collect();
    let mut edges = Vec::new();
    for a in 0..nodes.len() {
        for b in 0..nodes.len() {
            if a == b {
                continue;
            }
            let weakly = triples[a].iter().zip(&triples[b]).all(|(x, y)| x >= y);
            let strictly = triples[a].iter().zip(&triples[b]).any(|(x, y)| x > y);
            if weakly && strictly {
                edges.push((a, b));
            }
        }
    }
    if reduce {
        edges = transitive_reduction(nodes.len(), edges);
    }
    edges.sort_unstable();
    Ok(DominanceGraph { nodes, edges, reduced: reduce })
}

fn reachable_without(n: usize, edges: &[(usize, usize)], skip: (usize, usize)) -> bool {
    // DFS from skip.0 to skip.1 avoiding the direct edge
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if (a, b) != skip {
            adj[a].push(b);
        }
    }
    let mut stack = vec![skip.0];
    let mut seen = vec![false; n];
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if w == skip.1 {
                return true;
            }
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}

fn transitive_reduction(n: usize, mut edges: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    edges.sort_unstable();
    let mut keep = Vec::with_capacity(edges.len());
    let mut current = edges.clone();
    for &e in &edges {
        if reachable_without(n, &current, e) {
            current.retain(|&x| x != e);
        } else {
            keep.push(e);
        }
    }
    keep
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceFormat {
    Csv,
    Json,
}

/// Long-form surface export: one row per grid point, coordinates first,
/// value last. CSV carries 17 significant digits so parsing reproduces the
/// binary values exactly; JSON relies on shortest round-trip encoding.
pub fn export_surface(surface: &MeilcSurface, format: SurfaceFormat) -> String {
    let grid = surface.grid();
    match format {
        SurfaceFormat::Csv => {
            let mut out = String::new();
            for ax in 0..grid.dim() {
                out.push_str(&format!("u{},", ax + 1));
            }
            out.push_str("value\n");
            for (flat, value) in surface.values().iter().enumerate() {
                for coord in grid.point(flat) {
                    out.push_str(&format!("{coord},"));
                }
                out.push_str(&fmt_full(*value));
                out.push('\n');
            }
            out
        }
        SurfaceFormat::Json => {
            #[derive(Serialize)]
            struct SurfaceDoc<'a> {
                dims: usize,
                knots: Vec<&'a [f64]>,
                values: &'a [f64],
            }
            let doc = SurfaceDoc {
                dims: grid.dim(),
                knots: (0..grid.dim()).map(|ax| grid.axis(ax)).collect(),
                values: surface.values(),
            };
            serde_json::to_string(&doc).expect("serializable")
        }
    }
}

/// DOT rendering of the dominance graph, nodes and edges in lexicographic
/// order so output is stable across runs.
pub fn export_dot(graph: &DominanceGraph) -> String {
    let mut out = String::from("digraph dominance {\n");
    for node in &graph.nodes {
        out.push_str(&format!("  \"{node}\";\n"));
    }
    let mut labeled = graph.edge_labels();
    labeled.sort_unstable();
    for (a, b) in labeled {
        out.push_str(&format!("  \"{a}\" -> \"{b}\";\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn ds(rows: &[[f64; 2]]) -> Dataset {
        Dataset::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), None, None)
            .unwrap()
    }

    fn from_triple(entity: &str, g1: f64, g2: f64, megc: f64) -> InequalityReport {
        InequalityReport {
            entity: entity.into(),
            marginal_ginis: vec![g1, g2],
            megc,
            spearman_rho: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            n_effective: 1.0,
        }
    }

    #[test]
    fn report_on_comonotone_society() {
        let r = report(&ds(&[[3.0, 3.0], [4.0, 4.0], [6.0, 6.0]]), "one").unwrap();
        assert!((r.megc - 309.0 / 2535.0).abs() < 1e-15);
        assert_eq!(r.spearman_rho[0][1], 1.0);
        assert_eq!(r.n_effective, 3.0);
        assert_eq!(r.marginal_ginis.len(), 2);
    }

    #[test]
    fn report_spearman_half_for_swapped_pair() {
        let r = report(&ds(&[[4.0, 3.0], [3.0, 4.0], [6.0, 6.0]]), "three").unwrap();
        assert!((r.megc - 71.0 / 845.0).abs() < 1e-15);
        assert!((r.spearman_rho[0][1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn report_single_column_uses_plugin_reduction() {
        let d = Dataset::from_rows(&[vec![1.0], vec![2.0], vec![5.0]], None, None).unwrap();
        let r = report(&d, "uni").unwrap();
        assert_eq!(r.marginal_ginis.len(), 1);
        let plugin = gini(&d.column(0), None, GiniConvention::Plugin).unwrap();
        assert!((r.megc - plugin).abs() < 1e-15);
    }

    #[test]
    fn weighted_spearman_midpoint_ranks() {
        // replicating a row by weight matches physical replication
        let x = [1.0, 2.0, 3.0];
        let y = [2.0, 1.0, 3.0];
        let w = [2.0, 1.0, 1.0];
        let a = weighted_spearman(&x, &y, &w);
        let xr = [1.0, 1.0, 2.0, 3.0];
        let yr = [2.0, 2.0, 1.0, 3.0];
        let b = weighted_spearman(&xr, &yr, &[1.0; 4]);
        assert!((a - b).abs() < 1e-14);
        // degenerate column
        assert_eq!(weighted_spearman(&[1.0, 1.0], &[1.0, 2.0], &[1.0, 1.0]), 0.0);
    }

    #[test]
    fn dominance_quoted_pairs() {
        let us = from_triple("United States", 0.45, 0.80, 0.61);
        let fi = from_triple("Finland", 0.25, 0.60, 0.43);
        let g = dominance_graph(&[us.clone(), fi.clone()], false).unwrap();
        assert_eq!(g.edge_labels(), vec![("United States", "Finland")]);

        let it = from_triple("Italy", 0.34, 0.58, 0.48);
        let si = from_triple("Slovenia", 0.36, 0.59, 0.46);
        let g = dominance_graph(&[it, si], false).unwrap();
        assert!(g.edges.is_empty(), "discordant triples must not connect");

        let single = dominance_graph(&[us], false).unwrap();
        assert!(single.edges.is_empty());
    }

    #[test]
    fn dominance_is_permutation_invariant() {
        let a = from_triple("A", 0.5, 0.5, 0.5);
        let b = from_triple("B", 0.4, 0.4, 0.4);
        let c = from_triple("C", 0.3, 0.45, 0.2);
        let g1 = dominance_graph(&[a.clone(), b.clone(), c.clone()], true).unwrap();
        let g2 = dominance_graph(&[c, b, a], true).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn chain_reduces_to_two_edges() {
        let a = from_triple("A", 0.5, 0.5, 0.5);
        let b = from_triple("B", 0.4, 0.4, 0.4);
        let c = from_triple("C", 0.3, 0.3, 0.3);
        let full = dominance_graph(&[a.clone(), b.clone(), c.clone()], false).unwrap();
        assert_eq!(full.edges.len(), 3);
        let reduced = dominance_graph_checked(&[a, b, c]);
        assert_eq!(reduced.edges.len(), 2);
        assert_eq!(reduced.edge_labels(), vec![("A", "B"), ("B", "C")]);
        // reachability preserved
        assert_eq!(full.reachability(), reduced.reachability());
    }

    fn dominance_graph_checked(reports: &[InequalityReport]) -> DominanceGraph {
        dominance_graph(reports, true).unwrap()
    }

    #[test]
    fn report_is_column_scale_invariant() {
        let base = ds(&[[3.0, 5.0], [4.0, 1.0], [6.0, 2.0]]);
        let scaled = ds(&[[3.0, 500.0], [4.0, 100.0], [6.0, 200.0]]);
        let ra = report(&base, "x").unwrap();
        let rb = report(&scaled, "x").unwrap();
        assert!((ra.megc - rb.megc).abs() < 1e-12);
        for (a, b) in ra.marginal_ginis.iter().zip(&rb.marginal_ginis) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(ra.spearman_rho, rb.spearman_rho);
    }

    #[test]
    fn surface_export_csv_and_json() {
        let data = ds(&[[3.0, 3.0], [4.0, 4.0], [6.0, 6.0]]);
        let pseudo = pseudo_observations(&data);
        let grid = GridSpec::from_knots(vec![vec![0.0, 0.5, 1.0], vec![0.0, 0.5, 1.0]]).unwrap();
        let surf = crate::estimator::meilc_surface(&pseudo, &grid).unwrap();
        let csv = export_surface(&surf, SurfaceFormat::Csv);
        assert!(csv.starts_with("u1,u2,value\n"));
        assert!(csv.contains("\n0.5,0.5,0.33333333333333331\n"), "{csv}");
        assert!(csv.trim_end().ends_with("1,1,1.0000000000000000"));

        let json = export_surface(&surf, SurfaceFormat::Json);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let values: Vec<f64> = parsed["values"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        for (got, want) in values.iter().zip(surf.values()) {
            assert_eq!(got.to_bits(), want.to_bits());
        }
    }

    #[test]
    fn small_grid_export_ends_at_one() {
        let data = ds(&[[1.0, 2.0], [2.0, 1.0], [3.0, 3.0]]);
        let pseudo = pseudo_observations(&data);
        let grid = GridSpec::from_knots(vec![vec![0.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let surf = crate::estimator::meilc_surface(&pseudo, &grid).unwrap();
        let csv = export_surface(&surf, SurfaceFormat::Csv);
        let rows: Vec<&str> = csv.trim_end().lines().skip(1).collect();
        assert_eq!(rows.len(), 4);
        assert!(rows[3].starts_with("1,1,"));
        assert!(rows[3].ends_with("1.0000000000000000"));
    }

    #[test]
    fn dot_output_is_stable() {
        let us = from_triple("United States", 0.45, 0.80, 0.61);
        let fi = from_triple("Finland", 0.25, 0.60, 0.43);
        let g = dominance_graph(&[us, fi], true).unwrap();
        let dot = export_dot(&g);
        assert_eq!(
            dot,
            "digraph dominance {\n  \"Finland\";\n  \"United States\";\n  \"United States\" -> \"Finland\";\n}\n"
        );
        let empty = dominance_graph(&[], false).unwrap();
        assert_eq!(export_dot(&empty), "digraph dominance {\n}\n");
    }
}

//! Exact structural invariants: stoichiometric subspace, conservation laws, linkage classes,
//! deficiency, and one-species arrow diagrams.

use std::collections::BTreeSet;

use petgraph::algo::{connected_components, kosaraju_scc};
use petgraph::graph::{DiGraph, UnGraph};
use serde::{Serialize, Serializer};

use crate::error::StructuralError;
use crate::linalg::QMatrix;
use crate::network::{Complex, ReactionNetwork};
use crate::rational::{format_q, q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub num_reactants: usize,
    pub ell: usize,
    pub dim_s: usize,
    pub deficiency: usize,
    pub weakly_reversible: bool,
    pub reversible: bool,
    pub bimolecular: bool,
    #[serde(serialize_with = "serialize_q_rows")]
    pub conservation_basis: Vec<Vec<Q>>,
}

pub(crate) fn serialize_q_rows<S: Serializer>(rows: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
    let text: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(format_q).collect())
        .collect();
    text.serialize(s)
}

/// The n×r matrix whose columns are the reaction vectors.
pub fn stoichiometric_matrix(net: &ReactionNetwork) -> QMatrix {
    let cols: Vec<Vec<i64>> = net.reactions().iter().map(|r| r.vector()).collect();
    let mut m = QMatrix::zeros(net.n(), net.r());
    for (j, v) in cols.iter().enumerate() {
        for (i, &x) in v.iter().enumerate() {
            m[(i, j)] = q(x);
        }
    }
    m
}

/// Basis of the stoichiometric subspace (rows of the RREF of the transposed matrix).
pub fn stoichiometric_basis(net: &ReactionNetwork) -> Vec<Vec<Q>> {
    let (r, pivots) = stoichiometric_matrix(net).transpose().rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

pub fn conservation_basis(net: &ReactionNetwork) -> Vec<Vec<Q>> {
    stoichiometric_matrix(net).left_null_space_rref()
}

pub fn dim_s(net: &ReactionNetwork) -> usize {
    stoichiometric_matrix(net).rank()
}

pub fn is_full_dimensional(net: &ReactionNetwork) -> bool {
    dim_s(net) == net.n()
}

struct ComplexGraph {
    complexes: Vec<Complex>,
    edges: Vec<(usize, usize)>,
}

fn complex_graph(net: &ReactionNetwork) -> ComplexGraph {
    let complexes = net.complexes();
    let index = |c: &Complex| {
        complexes
            .iter()
            .position(|d| d == c)
            .expect("complex present")
    };
    let edges = net
        .reactions()
        .iter()
        .map(|r| (index(&r.reactant), index(&r.product)))
        .collect();
    ComplexGraph { complexes, edges }
}

fn linkage_count(g: &ComplexGraph) -> usize {
    let mut ug = UnGraph::<(), ()>::new_undirected();
    let nodes: Vec<_> = g.complexes.iter().map(|_| ug.add_node(())).collect();
    for &(a, b) in &g.edges {
        ug.add_edge(nodes[a], nodes[b], ());
    }
    connected_components(&ug)
}

fn scc_count(g: &ComplexGraph) -> usize {
    let mut dg = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = g.complexes.iter().map(|_| dg.add_node(())).collect();
    for &(a, b) in &g.edges {
        dg.add_edge(nodes[a], nodes[b], ());
    }
    kosaraju_scc(&dg).len()
}

/// Reaction indices grouped by linkage class, classes ordered by first reaction.
pub fn linkage_classes(net: &ReactionNetwork) -> Vec<Vec<usize>> {
    let g = complex_graph(net);
    let mut parent: Vec<usize> = (0..g.complexes.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while p[root] != root {
            root = p[root];
        }
        p[x] = root;
        root
    }
    for &(a, b) in &g.edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let mut classes: Vec<(usize, Vec<usize>)> = Vec::new();
    for (j, &(a, _)) in g.edges.iter().enumerate() {
        let root = find(&mut parent, a);
        match classes.iter_mut().find(|(r, _)| *r == root) {
            Some((_, v)) => v.push(j),
            None => classes.push((root, vec![j])),
        }
    }
    classes.into_iter().map(|(_, v)| v).collect()
}

pub fn is_weakly_reversible(net: &ReactionNetwork) -> bool {
    let g = complex_graph(net);
    scc_count(&g) == linkage_count(&g)
}

pub fn analyze_structure(net: &ReactionNetwork) -> StructureReport {
    let g = complex_graph(net);
    let m = g.complexes.len();
    let ell = linkage_count(&g);
    let dim_s = dim_s(net);
    StructureReport {
        n: net.n(),
        r: net.r(),
        m,
        num_reactants: net.reactant_complexes().len(),
        ell,
        dim_s,
        deficiency: m - ell - dim_s,
        weakly_reversible: scc_count(&g) == ell,
        reversible: net.is_reversible(),
        bimolecular: net.is_bimolecular(),
        conservation_basis: conservation_basis(net),
    }
}

pub fn deficiency(net: &ReactionNetwork) -> usize {
    analyze_structure(net).deficiency
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeficiencyZero {
    pub applies: bool,
    /// Deficiency zero and weakly reversible: exactly one positive steady state per class.
    pub uniqueness_guaranteed: bool,
}

pub fn deficiency_zero_applies(net: &ReactionNetwork) -> DeficiencyZero {
    let report = analyze_structure(net);
    let applies = report.deficiency == 0;
    DeficiencyZero {
        applies,
        uniqueness_guaranteed: applies && report.weakly_reversible,
    }
}

/// Per-linkage-class deficiencies (each class analyzed as its own network).
pub fn linkage_deficiencies(net: &ReactionNetwork) -> Vec<usize> {
    linkage_classes(net)
        .iter()
        .map(|idx| {
            let sub = net
                .sub_network(idx)
                .expect("linkage class is a valid network");
            deficiency(&sub)
        })
        .collect()
}

pub fn deficiency_one_applies(net: &ReactionNetwork) -> bool {
    let report = analyze_structure(net);
    if !report.weakly_reversible {
        return false;
    }
    let per_class = linkage_deficiencies(net);
    per_class.iter().all(|&d| d <= 1) && per_class.iter().sum::<usize>() == report.deficiency
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrowSymbol {
    Left,
    Right,
    Bidir,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ArrowDiagram {
    pub symbols: Vec<ArrowSymbol>,
}

impl ArrowDiagram {
    pub fn new(symbols: Vec<ArrowSymbol>) -> Self {
        Self { symbols }
    }
}

impl std::fmt::Display for ArrowDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<&str> = self
            .symbols
            .iter()
            .map(|s| match s {
                ArrowSymbol::Left => "<-",
                ArrowSymbol::Right => "->",
                ArrowSymbol::Bidir => "<->",
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn diagram_of_pairs(pairs: &[(u32, u32)]) -> ArrowDiagram {
    let reactants: BTreeSet<u32> = pairs.iter().map(|&(a, _)| a).collect();
    let symbols = reactants
        .into_iter()
        .map(|a| {
            let products = pairs.iter().filter(|&&(x, _)| x == a).map(|&(_, b)| b);
            let (mut up, mut down) = (false, false);
            for b in products {
                if b > a {
                    up = true;
                } else {
                    down = true;
                }
            }
            match (up, down) {
                (true, false) => ArrowSymbol::Right,
                (false, true) => ArrowSymbol::Left,
                _ => ArrowSymbol::Bidir,
            }
        })
        .collect();
    ArrowDiagram { symbols }
}

pub fn arrow_diagram(net: &ReactionNetwork) -> Result<ArrowDiagram, StructuralError> {
    if net.n() != 1 {
        return Err(StructuralError::NotOneSpecies(net.n()));
    }
    let pairs: Vec<(u32, u32)> = net
        .reactions()
        .iter()
        .map(|r| (r.reactant.0[0], r.product.0[0]))
        .collect();
    Ok(diagram_of_pairs(&pairs))
}

/// Distinct nontrivial one-species projections of the reactions onto `species`, sorted.
fn projected_reactions(net: &ReactionNetwork, species: usize) -> Vec<(u32, u32)> {
    let set: BTreeSet<(u32, u32)> = net
        .reactions()
        .iter()
        .map(|r| (r.reactant.0[species], r.product.0[species]))
        .filter(|(a, b)| a != b)
        .collect();
    set.into_iter().collect()
}

/// Every embedded one-species network on `species`, each as a sorted reaction list.
pub fn embedded_one_species_networks(
    net: &ReactionNetwork,
    species: usize,
) -> Result<Vec<ReactionNetwork>, StructuralError> {
    if species >= net.n() {
        return Err(StructuralError::SpeciesIndex(species));
    }
    let name = net.species()[species].clone();
    Ok(embedded_subsets(net, species)
        .map(|pairs| {
            let pairs: Vec<(Vec<u32>, Vec<u32>)> =
                pairs.iter().map(|&(a, b)| (vec![a], vec![b])).collect();
            ReactionNetwork::from_named_pairs(vec![name.clone()], &pairs)
                .expect("projected reactions are nontrivial and distinct")
        })
        .collect())
}

fn embedded_subsets(
    net: &ReactionNetwork,
    species: usize,
) -> impl Iterator<Item = Vec<(u32, u32)>> {
    let base = projected_reactions(net, species);
    let count = base.len();
    assert!(count < 24, "too many projected reactions to enumerate");
    (1u32..(1 << count)).map(move |mask| {
        (0..count)
            .filter(|k| mask & (1 << k) != 0)
            .map(|k| base[k])
            .collect()
    })
}

pub fn has_embedded_diagram(net: &ReactionNetwork, diagram: &ArrowDiagram) -> bool {
    (0..net.n()).any(|i| embedded_subsets(net, i).any(|pairs| diagram_of_pairs(&pairs) == *diagram))
}

/// All distinct reactant complexes agree everywhere except possibly at `species`.
pub fn reactants_differ_only_in(net: &ReactionNetwork, species: usize) -> bool {
    let reactants = net.reactant_complexes();
    reactants.iter().enumerate().all(|(a, ca)| {
        reactants[a + 1..].iter().all(|cb| {
            ca.0.iter()
                .zip(&cb.0)
                .enumerate()
                .all(|(k, (x, y))| k == species || x == y)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_network;

    fn net(s: &str) -> ReactionNetwork {
        parse_network(s).unwrap()
    }

    #[test]
    fn min3_structure() {
        let r = analyze_structure(&net("A+B -> 2C; C -> A; 2C -> 2B"));
        assert_eq!(
            (r.n, r.m, r.num_reactants, r.ell, r.dim_s, r.deficiency),
            (3, 5, 3, 2, 2, 1)
        );
        assert_eq!(r.conservation_basis, vec![vec![q(1), q(1), q(1)]]);
        assert!(!r.weakly_reversible);
    }

    #[test]
    fn deficiency_predicates() {
        let d = deficiency_zero_applies(&net("0 <-> A+B"));
        assert!(d.applies && d.uniqueness_guaranteed);
        let single = deficiency_zero_applies(&net("0 -> A"));
        assert!(single.applies && !single.uniqueness_guaranteed);
        let tri = net("0 <-> X1; X1 <-> 2X1; 2X1 <-> 0");
        assert_eq!(deficiency(&tri), 1);
        assert!(deficiency_one_applies(&tri));
        assert!(!deficiency_one_applies(&net("0 -> A; A -> 2A")));
        let full = analyze_structure(&net("A+B <-> 2A; 2B <-> A; 0 <-> B"));
        assert_eq!(full.dim_s, 2);
    }

    #[test]
    fn arrow_diagrams() {
        let d = arrow_diagram(&net("A -> 0; 2A -> 3A")).unwrap();
        assert_eq!(d.symbols, vec![ArrowSymbol::Left, ArrowSymbol::Right]);
        let d = arrow_diagram(&net("A -> 0; A -> 2A; 2A -> 3A")).unwrap();
        assert_eq!(d.symbols, vec![ArrowSymbol::Bidir, ArrowSymbol::Right]);
        assert!(arrow_diagram(&net("A -> B")).is_err());
    }

    #[test]
    fn embedded_networks_of_chain() {
        let g = net("0 <-> B; B -> A");
        let on_b: Vec<String> = embedded_one_species_networks(&g, 0)
            .unwrap()
            .iter()
            .map(crate::dsl::format_network)
            .collect();
        assert!(on_b.contains(&"0 -> B".to_string()));
        assert!(on_b.contains(&"B -> 0".to_string()));
        assert!(on_b.contains(&"0 -> B; B -> 0".to_string()));
        let on_a = embedded_one_species_networks(&g, 1).unwrap();
        assert_eq!(on_a.len(), 1);
        assert_eq!(crate::dsl::format_network(&on_a[0]), "0 -> A");
    }

    #[test]
    fn embedded_diagram_search() {
        let left_right = ArrowDiagram::new(vec![ArrowSymbol::Left, ArrowSymbol::Right]);
        assert!(has_embedded_diagram(&net("A -> 0; 2A -> 3A"), &left_right));
        assert!(!has_embedded_diagram(
            &net("A+B -> 2C; C -> A; 2C -> 2B"),
            &left_right
        ));
        // Projecting onto X1 leaves {0 -> X1, X1 -> 0}, whose diagram is (->, <-).
        let right_left = ArrowDiagram::new(vec![ArrowSymbol::Right, ArrowSymbol::Left]);
        assert!(has_embedded_diagram(&net("X2 <-> X1+X2"), &right_left));
        let left_right = ArrowDiagram::new(vec![ArrowSymbol::Left, ArrowSymbol::Right]);
        assert!(!has_embedded_diagram(&net("X2 <-> X1+X2"), &left_right));
    }

    #[test]
    fn reactant_differences() {
        let g = net("X2 <-> X1+X2");
        let x1 = g.species_index("X1").unwrap();
        assert!(reactants_differ_only_in(&g, x1));
        assert!(!reactants_differ_only_in(&g, 1 - x1));
        let h = net("0 <-> A+B");
        assert!(!reactants_differ_only_in(&h, 0) && !reactants_differ_only_in(&h, 1));
        assert!(reactants_differ_only_in(&net("A -> B"), 1));
    }
}

//! Submodule inventory, composition series and ladder graphs.
//!
//! Submodules are described by index sets and flags: every space here is
//! infinite-dimensional in `m`, and all structural statements reduce to
//! arithmetic on `(m, l, k)`.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::admissibility::{admissible_pairs, enumerate_admissible, kernel_eigenvalue, n1_radial_index};
use crate::error::Result;
use crate::operators::{e_coefficients, eta_coefficient_at, ETarget, ExactCoefficient, HarmonicSlot, Sign, Unit};
use crate::params::{weight_residue, Eigenvalue, KTypeIndex, ParameterSet};

/// Which of the four structure patterns applies, decided by `q` against
/// `±n (mod 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureCase {
    /// `q ≢ ±n`: every `H_{l,k}` is irreducible.
    Irreducible,
    /// `q ≡ n`, `q ≢ -n`: lowest weight submodules `H⁺`.
    Lowest,
    /// `q ≢ n`, `q ≡ -n`: highest weight submodules `H⁻`.
    Highest,
    /// `q ≡ n ≡ -n` (only for even `n`): both.
    Both,
}

impl StructureCase {
    pub fn of(params: &ParameterSet) -> Self {
        match (params.has_lowest(), params.has_highest()) {
            (false, false) => StructureCase::Irreducible,
            (true, false) => StructureCase::Lowest,
            (false, true) => StructureCase::Highest,
            (true, true) => StructureCase::Both,
        }
    }

    /// `1` to `4`.
    pub fn number(self) -> u8 {
        match self {
            StructureCase::Irreducible => 1,
            StructureCase::Lowest => 2,
            StructureCase::Highest => 3,
            StructureCase::Both => 4,
        }
    }
}

impl Serialize for StructureCase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

impl fmt::Display for StructureCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.number())
    }
}

/// `H_{l,k} = span{F_{m,l,k} : m ≡ 2k+q (mod 4)}` for one λ-admissible pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubmoduleDescriptor {
    /// The pair as listed by [`admissible_pairs`] (`(L, 0)` when `n = 1`).
    pub pair: (i64, i64),
    pub l: i64,
    pub k: i64,
    pub lambda: Eigenvalue,
    /// Weights run over `m ≡ residue (mod 4)`.
    pub residue: u8,
    pub step: i64,
    /// `2|k| + 4l + n`
    pub boundary_weight: i64,
    pub has_lowest: bool,
    pub has_highest: bool,
    /// `H⁺_{l,k}` is spanned by `m >= lowest_weight`.
    pub lowest_weight: Option<i64>,
    /// `H⁻_{l,k}` is spanned by `m <= highest_weight`.
    pub highest_weight: Option<i64>,
    pub case: StructureCase,
    pub irreducible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SubmoduleDescriptor {
    fn new(params: &ParameterSet, pair: (i64, i64), l: i64, k: i64, lambda: Eigenvalue) -> Self {
        let n = params.n();
        let boundary = KTypeIndex::new(0, l, k).boundary_weight(n);
        let case = StructureCase::of(params);
        let note = (k < 0).then(|| format!("negative k uses the harmonic (y1 - i y2)^{}", -k));
        Self {
            pair,
            l,
            k,
            lambda,
            residue: weight_residue(params, k),
            step: 4,
            boundary_weight: boundary,
            has_lowest: params.has_lowest(),
            has_highest: params.has_highest(),
            lowest_weight: params.has_lowest().then_some(boundary),
            highest_weight: params.has_highest().then_some(-boundary),
            case,
            irreducible: case == StructureCase::Irreducible,
            note,
        }
    }

    /// Whether `F_{m,l,k}` belongs to this space.
    pub fn contains_weight(&self, m: i64) -> bool {
        (m - self.residue as i64).rem_euclid(4) == 0
    }

    /// Whether `F_{m,l,k}` lies in `H⁺_{l,k}`.
    pub fn in_lowest(&self, m: i64) -> bool {
        self.contains_weight(m) && self.lowest_weight.is_some_and(|w| m >= w)
    }

    /// Whether `F_{m,l,k}` lies in `H⁻_{l,k}`.
    pub fn in_highest(&self, m: i64) -> bool {
        self.contains_weight(m) && self.highest_weight.is_some_and(|w| m <= w)
    }
}

/// `ker(Ω - 2λ)_K` split into the spaces `H_{l,k}` over the λ-admissible
/// pairs. For `n = 1` the pair `(L, 0)` becomes `l = L/2, k = L mod 2`.
pub fn decompose(params: &ParameterSet, lambda: Eigenvalue) -> Result<Vec<SubmoduleDescriptor>> {
    let n = params.n();
    Ok(admissible_pairs(n, lambda)?
        .into_iter()
        .map(|pair| {
            let (l, k) = if n == 1 { n1_radial_index(pair.0) } else { pair };
            SubmoduleDescriptor::new(params, pair, l, k, lambda)
        })
        .collect())
}

/// A term of a composition series. `H₀` is the `λ = 0` family, `H` the sum
/// over all admissible `λ`, and `±` marks the lowest (`+`) or highest (`-`)
/// weight parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    Zero,
    H0Minus,
    H0Plus,
    H0PlusH0Minus,
    H0,
    H0HMinus,
    H0HMinusHPlus,
    H0HPlus,
    H,
}

impl Layer {
    const H0_MINUS: u8 = 1;
    const H0_PLUS: u8 = 2;
    const H0_REST: u8 = 4;
    const H_MINUS: u8 = 8;
    const H_PLUS: u8 = 16;
    const H_REST: u8 = 32;

    /// The pieces making up the layer, as a bit set over
    /// `H₀⁻, H₀⁺, H₀ rest, H⁻, H⁺, H rest`.
    pub fn components(self) -> u8 {
        let h0 = Self::H0_MINUS | Self::H0_PLUS | Self::H0_REST;
        match self {
            Layer::Zero => 0,
            Layer::H0Minus => Self::H0_MINUS,
            Layer::H0Plus => Self::H0_PLUS,
            Layer::H0PlusH0Minus => Self::H0_PLUS | Self::H0_MINUS,
            Layer::H0 => h0,
            Layer::H0HMinus => h0 | Self::H_MINUS,
            Layer::H0HMinusHPlus => h0 | Self::H_MINUS | Self::H_PLUS,
            Layer::H0HPlus => h0 | Self::H_PLUS,
            Layer::H => h0 | Self::H_MINUS | Self::H_PLUS | Self::H_REST,
        }
    }

    /// Proper inclusion of the underlying spaces.
    pub fn strictly_inside(self, other: Layer) -> bool {
        let (a, b) = (self.components(), other.components());
        a & b == a && a != b
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layer::Zero => "0",
            Layer::H0Minus => "H₀⁻",
            Layer::H0Plus => "H₀⁺",
            Layer::H0PlusH0Minus => "H₀⁺⊕H₀⁻",
            Layer::H0 => "H₀",
            Layer::H0HMinus => "H₀⊕H⁻",
            Layer::H0HMinusHPlus => "H₀⊕H⁻⊕H⁺",
            Layer::H0HPlus => "H₀⊕H⁺",
            Layer::H => "H",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositionSeries {
    pub n: u32,
    pub q: u8,
    pub case: StructureCase,
    pub chain: Vec<Layer>,
    /// In case (1) the chain is only known to start with the unique
    /// irreducible submodule `H₀`.
    pub unique_irreducible: Option<Layer>,
}

impl CompositionSeries {
    pub fn is_strictly_increasing(&self) -> bool {
        self.chain.windows(2).all(|w| w[0].strictly_inside(w[1]))
    }
}

impl fmt::Display for CompositionSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let chain: Vec<String> = self.chain.iter().map(ToString::to_string).collect();
        write!(f, "case {}: {}", self.case, chain.join(" ⊂ "))
    }
}

/// The chain of `g`-submodules of `H₀ ⊕ H` for the given `(n, q)`.
pub fn composition_series(params: &ParameterSet) -> CompositionSeries {
    use Layer::*;
    let case = StructureCase::of(params);
    let chain = match case {
        StructureCase::Irreducible => vec![Zero, H0, H],
        StructureCase::Lowest => vec![Zero, H0Plus, H0, H0HPlus, H],
        StructureCase::Highest => vec![Zero, H0Minus, H0, H0HMinus, H],
        StructureCase::Both => vec![Zero, H0Minus, H0PlusH0Minus, H0, H0HMinus, H0HMinusHPlus, H],
    };
    CompositionSeries {
        n: params.n(),
        q: params.q(),
        case,
        chain,
        unique_irreducible: (case == StructureCase::Irreducible).then_some(H0),
    }
}

/// Eigenvalue of a pair `(l, k)` reached by the Heisenberg action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HeisenbergTarget {
    pub l: i64,
    pub k: i64,
    pub lambda: Eigenvalue,
}

/// Pairs reached from `(l, k)` by `E_j±`, in the order `(l-1, k+1)`,
/// `(l+1, k-1)`, `(l, k+1)`, `(l, k-1)`. Pairs with `l' < 0`, `k' < 0` or
/// (for `n = 1`) `k' > 1` are dropped; `l' = 0` lands in the `λ = 0` family.
pub fn heisenberg_targets(n: u32, l: i64, k: i64) -> Vec<HeisenbergTarget> {
    [(l - 1, k + 1), (l + 1, k - 1), (l, k + 1), (l, k - 1)]
        .into_iter()
        .filter(|&(l, k)| l >= 0 && k >= 0 && (n != 1 || k <= 1))
        .map(|(l, k)| HeisenbergTarget { l, k, lambda: kernel_eigenvalue(n, l, k) })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeLabel {
    EtaPlus,
    EtaMinus,
    EPlus,
    EMinus,
}

impl EdgeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeLabel::EtaPlus => "eta+",
            EdgeLabel::EtaMinus => "eta-",
            EdgeLabel::EPlus => "E_j+",
            EdgeLabel::EMinus => "E_j-",
        }
    }
}

impl Serialize for EdgeLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphNode {
    pub index: KTypeIndex,
    pub lambda: Eigenvalue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphEdge {
    pub from: KTypeIndex,
    pub to: KTypeIndex,
    pub to_lambda: Eigenvalue,
    pub label: EdgeLabel,
    pub coefficient: ExactCoefficient,
    /// `[re, im]` of the coefficient at the graph's `s`.
    pub value: [f64; 2],
    /// The target lies outside the generated node set.
    pub dangling: bool,
}

/// What to put into a [`LadderGraph`].
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSpec {
    /// Eigenvalues whose K-types become nodes; `0` stands for the `l = 0`
    /// family.
    pub lambdas: Vec<Eigenvalue>,
    pub m_min: i64,
    pub m_max: i64,
    /// Largest `k` of the `l = 0` family.
    pub zero_k_max: i64,
    pub eta: bool,
    pub heisenberg: Vec<Sign>,
}

/// K-type indices with `η±` and `E_j±` edges. The `E_j±` edges are drawn
/// between isotypic components, so they do not depend on `j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderGraph {
    pub n: u32,
    pub q: u8,
    pub s: [f64; 2],
    pub m_min: i64,
    pub m_max: i64,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

/// Default graph: the `l = 0` family and every admissible `λ <= lambda_max`,
/// with both ladders and both Heisenberg signs. The `l = 0` family is cut at
/// one more than the largest `k` among the other nodes (at least 3).
pub fn ladder_graph(params: &ParameterSet, lambda_max: i64, m_min: i64, m_max: i64) -> Result<LadderGraph> {
    let mut lambdas = vec![Eigenvalue(0)];
    lambdas.extend(enumerate_admissible(params.n(), lambda_max));
    let spec = GraphSpec {
        zero_k_max: default_zero_k_max(params.n(), &lambdas)?,
        lambdas,
        m_min,
        m_max,
        eta: true,
        heisenberg: Sign::BOTH.to_vec(),
    };
    LadderGraph::build(params, &spec)
}

/// One more than the largest `k` over the non-zero `lambdas`, at least 3
/// (at most 1 for `n = 1`).
pub fn default_zero_k_max(n: u32, lambdas: &[Eigenvalue]) -> Result<i64> {
    let mut k_max = 2;
    for &lambda in lambdas.iter().filter(|l| !l.is_zero()) {
        for (_, k) in pairs_for(n, lambda)? {
            k_max = k_max.max(k);
        }
    }
    Ok(if n == 1 { 1 } else { k_max + 1 })
}

/// `(l, k)` K-type labels for a non-zero admissible λ; `n = 2` is restricted
/// to `k >= 0`.
fn pairs_for(n: u32, lambda: Eigenvalue) -> Result<Vec<(i64, i64)>> {
    Ok(admissible_pairs(n, lambda)?
        .into_iter()
        .map(|p| if n == 1 { n1_radial_index(p.0) } else { p })
        .filter(|&(_, k)| k >= 0)
        .collect())
}

impl LadderGraph {
    pub fn build(params: &ParameterSet, spec: &GraphSpec) -> Result<LadderGraph> {
        let n = params.n();
        let s = params.s();
        let mut labels: BTreeSet<(Eigenvalue, i64, i64)> = BTreeSet::new();
        for &lambda in &spec.lambdas {
            if lambda.is_zero() {
                let k_top = if n == 1 { spec.zero_k_max.min(1) } else { spec.zero_k_max };
                labels.extend((0..=k_top).map(|k| (lambda, 0, k)));
            } else {
                labels.extend(pairs_for(n, lambda)?.into_iter().map(|(l, k)| (lambda, l, k)));
            }
        }
        let mut nodes = Vec::new();
        for &(lambda, l, k) in &labels {
            let residue = weight_residue(params, k) as i64;
            let first = spec.m_min + (residue - spec.m_min).rem_euclid(4);
            nodes
                .extend((first..=spec.m_max).step_by(4).map(|m| GraphNode { index: KTypeIndex::new(m, l, k), lambda }));
        }
        let present: BTreeSet<KTypeIndex> = nodes.iter().map(|v| v.index).collect();
        let coefficient_value = |c: &ExactCoefficient| {
            let v = c.to_complex(s);
            [v.re, v.im]
        };

        let mut edges = Vec::new();
        for node in &nodes {
            let from = node.index;
            if spec.eta {
                for (sign, label) in [(Sign::Plus, EdgeLabel::EtaPlus), (Sign::Minus, EdgeLabel::EtaMinus)] {
                    let c = eta_coefficient_at(from, n, sign);
                    if c.is_zero() {
                        continue;
                    }
                    let to = KTypeIndex::new(from.m + 4 * sign.as_i64(), from.l, from.k);
                    let coefficient = ExactCoefficient::new(c, Unit::One);
                    edges.push(GraphEdge {
                        from,
                        to,
                        to_lambda: node.lambda,
                        label,
                        value: coefficient_value(&coefficient),
                        coefficient,
                        dangling: !present.contains(&to),
                    });
                }
            }
            for &sign in &spec.heisenberg {
                let label = match sign {
                    Sign::Plus => EdgeLabel::EPlus,
                    Sign::Minus => EdgeLabel::EMinus,
                };
                let coefficients = e_coefficients(from, n, sign)?;
                for (target, coefficient) in ETarget::ALL.into_iter().zip(coefficients) {
                    let to = target.index(from, sign);
                    let vanishing_harmonic = target.slot == HarmonicSlot::Lowered && from.k == 0;
                    let invalid = to.l < 0 || to.k < 0 || (n == 1 && to.k > 1);
                    if coefficient.is_zero() || vanishing_harmonic || invalid {
                        continue;
                    }
                    edges.push(GraphEdge {
                        from,
                        to,
                        to_lambda: kernel_eigenvalue(n, to.l, to.k),
                        label,
                        value: coefficient_value(&coefficient),
                        coefficient,
                        dangling: !present.contains(&to),
                    });
                }
            }
        }
        Ok(LadderGraph { n, q: params.q(), s: [s.re, s.im], m_min: spec.m_min, m_max: spec.m_max, nodes, edges })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    /// Graphviz rendering; nodes are ranked by `λ` and laid out by `m`.
    pub fn to_dot(&self) -> String {
        let id = |i: &KTypeIndex| format!("\"{}_{}_{}\"", i.m, i.l, i.k);
        let mut out = String::new();
        let _ = writeln!(out, "digraph ladder {{");
        let _ = writeln!(out, "  label=\"n={} q={}\";", self.n, self.q);
        let _ = writeln!(out, "  node [shape=box, fontsize=10];");
        for v in &self.nodes {
            let _ = writeln!(
                out,
                "  {} [label=\"m={} l={} k={}\\nλ={}\"];",
                id(&v.index),
                v.index.m,
                v.index.l,
                v.index.k,
                v.lambda
            );
        }
        let mut dangling = BTreeSet::new();
        for e in &self.edges {
            if e.dangling {
                dangling.insert(e.to);
            }
        }
        for d in &dangling {
            let _ = writeln!(out, "  {} [label=\"m={} l={} k={}\", style=dashed];", id(d), d.m, d.l, d.k);
        }
        for e in &self.edges {
            let style = if e.dangling { ", style=dashed" } else { "" };
            let _ = writeln!(
                out,
                "  {} -> {} [label=\"{} {}\"{}];",
                id(&e.from),
                id(&e.to),
                e.label.as_str(),
                e.coefficient,
                style
            );
        }
        out.push_str("}\n");
        out
    }
}

/// A sample of the curve `λ = l(2l + 2k + n - 2)` solved for real `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelPoint {
    pub lambda: i64,
    pub l: f64,
    pub k: f64,
}

/// `samples` points on each admissible level curve `λ <= lambda_max`,
/// for `l` in `(0, l_max]` where `k(l_max) = 0`.
pub fn level_curves(n: u32, lambda_max: i64, samples: usize) -> Vec<LevelPoint> {
    let nn = n as f64;
    let mut out = Vec::new();
    for lambda in enumerate_admissible(n, lambda_max) {
        let lam = lambda.value() as f64;
        let l_max = (-(nn - 2.0) + ((nn - 2.0).powi(2) + 8.0 * lam).sqrt()) / 4.0;
        for i in 1..=samples {
            let l = l_max * i as f64 / samples as f64;
            let k = (lam / l - 2.0 * l - nn + 2.0) / 2.0;
            out.push(LevelPoint { lambda: lambda.value(), l, k: k.max(0.0) });
        }
    }
    out
}

/// Level curves as CSV with header `lambda,l,k`.
pub fn level_curves_csv(points: &[LevelPoint]) -> String {
    let mut out = String::from("lambda,l,k\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", p.lambda, p.l, p.k);
    }
    out
}

/// Decompositions for several eigenvalues together with the series.
#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub n: u32,
    pub q: u8,
    pub series: CompositionSeries,
    pub decompositions: Vec<Decomposition>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub lambda: Eigenvalue,
    pub submodules: Vec<SubmoduleDescriptor>,
}

pub fn structure_report(params: &ParameterSet, lambdas: &[Eigenvalue]) -> Result<StructureReport> {
    let decompositions = lambdas
        .iter()
        .map(|&lambda| Ok(Decomposition { lambda, submodules: decompose(params, lambda)? }))
        .collect::<Result<_>>()?;
    Ok(StructureReport { n: params.n(), q: params.q(), series: composition_series(params), decompositions })
}

/// `λ' - λ` for a Heisenberg target, as the closed-form shift it must equal.
pub fn expected_shifts(n: u32, l: i64, k: i64) -> [i64; 4] {
    let big = 2 * l + 2 * k + n as i64 - 2;
    [-big, big, 2 * l, -2 * l]
}

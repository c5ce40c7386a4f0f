//! Decomposition builders behind a common trait, registered by name and
//! selected at runtime.

use super::builders::{
    decompose_block_matching, decompose_circulant, decompose_nearest_point, decompose_perfect_matching, decompose_z2n,
};
use super::{DecomposeError, SeparableDecomposition};
use crate::density::{
    circulant_density, density_of_graph, group_density_z2n, CirculantSpec, DensityMatrix, GroupFunctionZ2n,
};
use crate::graph::BipartiteLabeledGraph;

/// What a strategy is asked to decompose.
#[derive(Debug, Clone, PartialEq)]
pub enum DecompositionInput {
    Graph(BipartiteLabeledGraph),
    Circulant { spec: CirculantSpec, p: usize, q: usize },
    Z2n { f: GroupFunctionZ2n, k: u32, l: u32 },
}

impl DecompositionInput {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Graph(_) => "graph",
            Self::Circulant { .. } => "circulant",
            Self::Z2n { .. } => "z2n",
        }
    }

    /// The state the decomposition must reconstruct, under the input's split.
    pub fn density(&self) -> Result<DensityMatrix, DecomposeError> {
        match self {
            Self::Graph(g) => Ok(density_of_graph(g)?),
            Self::Circulant { spec, p, q } => {
                let rho = circulant_density(spec)?;
                let dim = rho.dim();
                rho.with_split(*p, *q).map_err(|_| DecomposeError::SplitMismatch { p: *p, q: *q, dim })
            }
            Self::Z2n { f, k, l } => {
                let rho = group_density_z2n(f)?;
                let (p, q) = (1usize << k, 1usize << l);
                let dim = rho.dim();
                rho.with_split(p, q).map_err(|_| DecomposeError::SplitMismatch { p, q, dim })
            }
        }
    }
}

pub trait DecompositionStrategy: Send + Sync {
    /// Registry key, also the CLI flag name.
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Whether the input kind matches; preconditions on the content are
    /// checked by [`decompose`](Self::decompose).
    fn accepts(&self, input: &DecompositionInput) -> bool;

    fn decompose(&self, input: &DecompositionInput) -> Result<SeparableDecomposition, DecomposeError>;
}

struct GraphStrategy {
    name: &'static str,
    description: &'static str,
    build: fn(&BipartiteLabeledGraph) -> Result<SeparableDecomposition, DecomposeError>,
}

impl DecompositionStrategy for GraphStrategy {
    fn name(&self) -> &'static str {
        self.name
    }

    fn description(&self) -> &'static str {
        self.description
    }

    fn accepts(&self, input: &DecompositionInput) -> bool {
        matches!(input, DecompositionInput::Graph(_))
    }

    fn decompose(&self, input: &DecompositionInput) -> Result<SeparableDecomposition, DecomposeError> {
        match input {
            DecompositionInput::Graph(g) => (self.build)(g),
            other => Err(DecomposeError::NotApplicable { strategy: self.name, input: other.kind() }),
        }
    }
}

struct CirculantStrategy;

impl DecompositionStrategy for CirculantStrategy {
    fn name(&self) -> &'static str {
        "circulant"
    }

    fn description(&self) -> &'static str {
        "circulant states, DFT eigenvectors factored under any split"
    }

    fn accepts(&self, input: &DecompositionInput) -> bool {
        matches!(input, DecompositionInput::Circulant { .. })
    }

    fn decompose(&self, input: &DecompositionInput) -> Result<SeparableDecomposition, DecomposeError> {
        match input {
            DecompositionInput::Circulant { spec, p, q } => decompose_circulant(spec, *p, *q),
            other => Err(DecomposeError::NotApplicable { strategy: self.name(), input: other.kind() }),
        }
    }
}

struct Z2nStrategy;

impl DecompositionStrategy for Z2nStrategy {
    fn name(&self) -> &'static str {
        "z2n"
    }

    fn description(&self) -> &'static str {
        "Z2^n group-algebra states, Hadamard columns factored as 2^k x 2^l"
    }

    fn accepts(&self, input: &DecompositionInput) -> bool {
        matches!(input, DecompositionInput::Z2n { .. })
    }

    fn decompose(&self, input: &DecompositionInput) -> Result<SeparableDecomposition, DecomposeError> {
        match input {
            DecompositionInput::Z2n { f, k, l } => decompose_z2n(f, *k, *l),
            other => Err(DecomposeError::NotApplicable { strategy: self.name(), input: other.kind() }),
        }
    }
}

/// Ordered collection of strategies; lookup is by name and iteration
/// follows registration order.
pub struct StrategyRegistry {
    strategies: Vec<Box<dyn DecompositionStrategy>>,
}

impl StrategyRegistry {
    pub fn new() -> Self {
        Self { strategies: Vec::new() }
    }

    /// The five built-in families.
    pub fn with_defaults() -> Self {
        let mut r = Self::new();
        r.register(Box::new(GraphStrategy {
            name: "nearest-point",
            description: "nearest-point lattice graphs, crossing pairs split into product terms",
            build: decompose_nearest_point,
        }));
        r.register(Box::new(GraphStrategy {
            name: "matching",
            description: "perfect matchings with q = 2, cycles split by roots of unity",
            build: decompose_perfect_matching,
        }));
        r.register(Box::new(GraphStrategy {
            name: "block-matching",
            description: "perfect entangling matchings made of column-pair blocks",
            build: decompose_block_matching,
        }));
        r.register(Box::new(CirculantStrategy));
        r.register(Box::new(Z2nStrategy));
        r
    }

    /// Adds a strategy, replacing any previous one with the same name.
    pub fn register(&mut self, strategy: Box<dyn DecompositionStrategy>) {
        match self.strategies.iter().position(|s| s.name() == strategy.name()) {
            Some(i) => self.strategies[i] = strategy,
            None => self.strategies.push(strategy),
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn DecompositionStrategy> {
        self.strategies.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.iter().map(|s| s.name()).collect()
    }

    pub fn strategies(&self) -> impl Iterator<Item = &dyn DecompositionStrategy> {
        self.strategies.iter().map(|s| s.as_ref())
    }

    pub fn decompose(&self, name: &str, input: &DecompositionInput) -> Result<SeparableDecomposition, DecomposeError> {
        let strategy = self.get(name).ok_or_else(|| DecomposeError::UnknownStrategy(name.to_string()))?;
        if !strategy.accepts(input) {
            return Err(DecomposeError::NotApplicable { strategy: strategy.name(), input: input.kind() });
        }
        strategy.decompose(input)
    }
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_names_in_order() {
        let r = StrategyRegistry::with_defaults();
        assert_eq!(r.names(), vec!["nearest-point", "matching", "block-matching", "circulant", "z2n"]);
    }

    #[test]
    fn dispatch_by_name() {
        let r = StrategyRegistry::with_defaults();
        let input =
            DecompositionInput::Circulant { spec: CirculantSpec::from_real(&[0.25, 0.125, 0.0, 0.125]), p: 2, q: 2 };
        assert_eq!(r.decompose("circulant", &input).unwrap().terms.len(), 3);
        assert!(matches!(r.decompose("matching", &input), Err(DecomposeError::NotApplicable { .. })));
        assert!(matches!(r.decompose("nope", &input), Err(DecomposeError::UnknownStrategy(_))));
    }

    #[test]
    fn registering_replaces_by_name() {
        struct Refuse;
        impl DecompositionStrategy for Refuse {
            fn name(&self) -> &'static str {
                "circulant"
            }
            fn description(&self) -> &'static str {
                "always refuses"
            }
            fn accepts(&self, _: &DecompositionInput) -> bool {
                true
            }
            fn decompose(&self, _: &DecompositionInput) -> Result<SeparableDecomposition, DecomposeError> {
                Err(DecomposeError::EmptyGraph)
            }
        }
        let mut r = StrategyRegistry::with_defaults();
        r.register(Box::new(Refuse));
        assert_eq!(r.names().len(), 5);
        let input = DecompositionInput::Circulant { spec: CirculantSpec::from_real(&[1.0]), p: 1, q: 1 };
        assert_eq!(r.decompose("circulant", &input), Err(DecomposeError::EmptyGraph));
    }
}

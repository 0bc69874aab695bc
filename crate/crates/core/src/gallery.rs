//! Bundled worked examples.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleKind {
    /// A test configuration datum.
    Datum,
    /// A normal-cone degeneration catalog.
    Catalog,
}

#[derive(Clone, Copy, Debug)]
pub struct Example {
    pub name: &'static str,
    pub description: &'static str,
    pub kind: ExampleKind,
    pub source: &'static str,
    /// Parameter declarations applied by default.
    pub assume: &'static [&'static str],
    /// `(k, lambda)` for the Fano-identity path, with `K = lambda H` mod the base.
    pub fano_identity: Option<(usize, &'static str)>,
}

pub const EXAMPLES: &[Example] = &[
    Example {
        name: "fano-point",
        description: "point of codimension 3 on a Fano threefold fibered over a surface",
        kind: ExampleKind::Catalog,
        source: include_str!("../fixtures/fano-point.json"),
        assume: &[],
        fano_identity: None,
    },
    Example {
        name: "lcbase",
        description: "C x B over an lc surface B, normal cone of the fiber over an lc point; E^4 = u vanishes",
        kind: ExampleKind::Datum,
        source: include_str!("../fixtures/lcbase.json"),
        assume: &["u=0"],
        fano_identity: Some((2, "1")),
    },
    Example {
        name: "p1-point",
        description: "deformation to the normal cone of a point on P^1",
        kind: ExampleKind::Datum,
        source: include_str!("../fixtures/p1-point.json"),
        assume: &[],
        fano_identity: None,
    },
    Example {
        name: "trivial",
        description: "trivial configuration of P^1 over a point",
        kind: ExampleKind::Datum,
        source: include_str!("../fixtures/trivial.json"),
        assume: &[],
        fano_identity: None,
    },
];

pub fn find(name: &str) -> Option<&'static Example> {
    EXAMPLES.iter().find(|e| e.name == name)
}

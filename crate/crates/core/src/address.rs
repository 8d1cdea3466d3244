//! Vertex addresses and their textual grammar.
//!
//! Ground addresses: host `X[3]`, indexed copy `Y@3.v`, replicate `Z#0.v`,
//! contracted torso vertex `V[Y@3]`. Symbolic forms replace the number with a
//! loop variable plus offset, e.g. `X[n+1]` or `Y@n.y`.

use std::fmt;

pub type Name = String;

/// Index expression of a symbolic address: a constant or `var + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    Ground(u64),
    Affine(u64),
}

impl Index {
    pub fn at(self, n: u64) -> u64 {
        match self {
            Index::Ground(g) => g,
            Index::Affine(c) => n + c,
        }
    }

    pub fn is_affine(self) -> bool {
        matches!(self, Index::Affine(_))
    }

    /// The unique `n` with `self.at(n) == value`, if the expression is affine.
    pub fn solve(self, value: u64) -> Solve {
        match self {
            Index::Ground(g) if g == value => Solve::Always,
            Index::Ground(_) => Solve::Never,
            Index::Affine(c) => value.checked_sub(c).map_or(Solve::Never, Solve::At),
        }
    }
}

/// Solutions of `term(n) == v` for a single symbolic term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solve {
    Never,
    At(u64),
    Always,
}

/// Selects one copy of a component pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Selector<I = u64> {
    Indexed(I),
    Replicate(I),
}

impl<I: Copy> Selector<I> {
    pub fn value(&self) -> I {
        match *self {
            Selector::Indexed(i) | Selector::Replicate(i) => i,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentId<I = u64> {
    pub pattern: Name,
    pub sel: Selector<I>,
}

impl ComponentId {
    pub fn indexed(pattern: impl Into<Name>, i: u64) -> Self {
        ComponentId { pattern: pattern.into(), sel: Selector::Indexed(i) }
    }

    pub fn replicate(pattern: impl Into<Name>, k: u64) -> Self {
        ComponentId { pattern: pattern.into(), sel: Selector::Replicate(k) }
    }

    pub fn copy(&self) -> u64 {
        self.sel.value()
    }
}

impl ComponentId<Index> {
    pub fn at(&self, n: u64) -> ComponentId {
        let sel = match self.sel {
            Selector::Indexed(i) => Selector::Indexed(i.at(n)),
            Selector::Replicate(i) => Selector::Replicate(i.at(n)),
        };
        ComponentId { pattern: self.pattern.clone(), sel }
    }

    pub fn solve(&self, target: &ComponentId) -> Solve {
        match (self.sel, target.sel) {
            _ if self.pattern != target.pattern => Solve::Never,
            (Selector::Indexed(i), Selector::Indexed(v)) | (Selector::Replicate(i), Selector::Replicate(v)) => {
                i.solve(v)
            }
            _ => Solve::Never,
        }
    }
}

impl From<ComponentId> for ComponentId<Index> {
    fn from(c: ComponentId) -> Self {
        let sel = match c.sel {
            Selector::Indexed(i) => Selector::Indexed(Index::Ground(i)),
            Selector::Replicate(i) => Selector::Replicate(Index::Ground(i)),
        };
        ComponentId { pattern: c.pattern, sel }
    }
}

/// A vertex of the presented graph `G` or of its torso `K`.
///
/// The derived order is the canonical vertex order: host vertices by family
/// name then index, then pattern-copy vertices by (pattern, copy, local name),
/// then contracted vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex<I = u64> {
    Host { family: Name, index: I },
    Inner { component: ComponentId<I>, local: Name },
    Contracted(ComponentId<I>),
}

pub type SymVertex = Vertex<Index>;

impl<I> Vertex<I> {
    pub fn host(family: impl Into<Name>, index: I) -> Self {
        Vertex::Host { family: family.into(), index }
    }

    pub fn is_host(&self) -> bool {
        matches!(self, Vertex::Host { .. })
    }

    pub fn component(&self) -> Option<&ComponentId<I>> {
        match self {
            Vertex::Inner { component, .. } => Some(component),
            _ => None,
        }
    }
}

impl Vertex {
    pub fn inner(component: ComponentId, local: impl Into<Name>) -> Self {
        Vertex::Inner { component, local: local.into() }
    }

    pub fn contracted(component: ComponentId) -> Self {
        Vertex::Contracted(component)
    }

    pub fn host_index(&self) -> Option<u64> {
        match self {
            Vertex::Host { index, .. } => Some(*index),
            _ => None,
        }
    }

    /// Parses a ground address such as `X[3]`, `Y@3.y`, `Z#0.z` or `V[Y@3]`.
    pub fn parse(s: &str) -> Result<Vertex, AddressError> {
        let sym = SymVertex::parse_with(s, None)?;
        Ok(sym.at(0))
    }
}

impl SymVertex {
    pub fn at(&self, n: u64) -> Vertex {
        match self {
            Vertex::Host { family, index } => Vertex::Host { family: family.clone(), index: index.at(n) },
            Vertex::Inner { component, local } => {
                Vertex::Inner { component: component.at(n), local: local.clone() }
            }
            Vertex::Contracted(c) => Vertex::Contracted(c.at(n)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Vertex::Host { index, .. } => !index.is_affine(),
            Vertex::Inner { component, .. } | Vertex::Contracted(component) => {
                !component.sel.value().is_affine()
            }
        }
    }

    /// The index expression carried by the term.
    pub fn index(&self) -> Index {
        match self {
            Vertex::Host { index, .. } => *index,
            Vertex::Inner { component, .. } | Vertex::Contracted(component) => component.sel.value(),
        }
    }

    /// A key that ignores the index: two terms with equal keys denote the same
    /// vertex exactly when their indices agree.
    pub fn kind_key(&self) -> (u8, &str, &str) {
        match self {
            Vertex::Host { family, .. } => (0, family, ""),
            Vertex::Inner { component, local } => {
                let tag = if matches!(component.sel, Selector::Indexed(_)) { 1 } else { 2 };
                (tag, &component.pattern, local)
            }
            Vertex::Contracted(c) => {
                let tag = if matches!(c.sel, Selector::Indexed(_)) { 3 } else { 4 };
                (tag, &c.pattern, "")
            }
        }
    }

    pub fn solve(&self, target: &Vertex) -> Solve {
        match (self, target) {
            (Vertex::Host { family, index }, Vertex::Host { family: f2, index: v }) if family == f2 => {
                index.solve(*v)
            }
            (Vertex::Inner { component, local }, Vertex::Inner { component: c2, local: l2 })
                if local == l2 =>
            {
                component.solve(c2)
            }
            (Vertex::Contracted(c), Vertex::Contracted(c2)) => c.solve(c2),
            _ => Solve::Never,
        }
    }

    /// Parses a possibly symbolic address; `var` names the loop variable
    /// (`None` admits ground addresses only).
    pub fn parse_with(s: &str, var: Option<&str>) -> Result<SymVertex, AddressError> {
        let s = s.trim();
        let err = |msg: &str| AddressError { text: s.to_owned(), msg: msg.to_owned() };
        if let Some(inner) = s.strip_prefix("V[").and_then(|r| r.strip_suffix(']')) {
            if inner.contains('@') || inner.contains('#') {
                let (pattern, sel) = parse_component(inner, var).map_err(|m| err(&m))?;
                return Ok(Vertex::Contracted(ComponentId { pattern, sel }));
            }
        }
        if let Some(open) = s.find('[') {
            let family = &s[..open];
            let rest = s[open + 1..].strip_suffix(']').ok_or_else(|| err("missing `]`"))?;
            check_name(family).map_err(|m| err(&m))?;
            let index = parse_index(rest, var).map_err(|m| err(&m))?;
            return Ok(Vertex::Host { family: family.to_owned(), index });
        }
        let dot = s.rfind('.').ok_or_else(|| err("expected `Name[k]`, `Name@k.v` or `Name#k.v`"))?;
        let (comp, local) = (&s[..dot], &s[dot + 1..]);
        check_name(local).map_err(|m| err(&m))?;
        let (pattern, sel) = parse_component(comp, var).map_err(|m| err(&m))?;
        Ok(Vertex::Inner { component: ComponentId { pattern, sel }, local: local.to_owned() })
    }

    pub fn display_with<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        VertexDisplay { v: self, var }
    }
}

impl From<Vertex> for SymVertex {
    fn from(v: Vertex) -> Self {
        match v {
            Vertex::Host { family, index } => Vertex::Host { family, index: Index::Ground(index) },
            Vertex::Inner { component, local } => Vertex::Inner { component: component.into(), local },
            Vertex::Contracted(c) => Vertex::Contracted(c.into()),
        }
    }
}

/// Parses `Y@3`, `Z#0`, `Y@n+1`.
pub fn parse_component_id(s: &str, var: Option<&str>) -> Result<ComponentId<Index>, AddressError> {
    parse_component(s.trim(), var)
        .map(|(pattern, sel)| ComponentId { pattern, sel })
        .map_err(|msg| AddressError { text: s.trim().to_owned(), msg })
}

fn parse_component(s: &str, var: Option<&str>) -> Result<(Name, Selector<Index>), String> {
    let (pattern, idx, indexed) = if let Some(at) = s.find('@') {
        (&s[..at], &s[at + 1..], true)
    } else if let Some(h) = s.find('#') {
        (&s[..h], &s[h + 1..], false)
    } else {
        return Err("expected `@` or `#` in component address".into());
    };
    check_name(pattern)?;
    let index = parse_index(idx, var)?;
    let sel = if indexed { Selector::Indexed(index) } else { Selector::Replicate(index) };
    Ok((pattern.to_owned(), sel))
}

pub(crate) fn parse_index(s: &str, var: Option<&str>) -> Result<Index, String> {
    let s = s.trim();
    if let Ok(g) = s.parse::<u64>() {
        return Ok(Index::Ground(g));
    }
    let Some(var) = var else {
        return Err(format!("expected a number, found `{s}`"));
    };
    let Some(rest) = s.strip_prefix(var) else {
        return Err(format!("expected a number or `{var}+c`, found `{s}`"));
    };
    let rest = rest.trim();
    if rest.is_empty() {
        return Ok(Index::Affine(0));
    }
    rest.strip_prefix('+')
        .and_then(|c| c.trim().parse::<u64>().ok())
        .map(Index::Affine)
        .ok_or_else(|| format!("expected `{var}+c`, found `{s}`"))
}

pub(crate) fn check_name(s: &str) -> Result<(), String> {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return Err(format!("invalid name `{s}`")),
    }
    if chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        Ok(())
    } else {
        Err(format!("invalid name `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad address `{text}`: {msg}")]
pub struct AddressError {
    pub text: String,
    pub msg: String,
}

trait FmtIndex {
    fn fmt_index(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result;
}

impl FmtIndex for u64 {
    fn fmt_index(&self, f: &mut fmt::Formatter<'_>, _var: &str) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FmtIndex for Index {
    fn fmt_index(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        match self {
            Index::Ground(g) => write!(f, "{g}"),
            Index::Affine(0) => f.write_str(var),
            Index::Affine(c) => write!(f, "{var}+{c}"),
        }
    }
}

fn fmt_component<I: FmtIndex>(c: &ComponentId<I>, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
    let (sep, idx) = match &c.sel {
        Selector::Indexed(i) => ('@', i),
        Selector::Replicate(i) => ('#', i),
    };
    write!(f, "{}{sep}", c.pattern)?;
    idx.fmt_index(f, var)
}

fn fmt_vertex<I: FmtIndex>(v: &Vertex<I>, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
    match v {
        Vertex::Host { family, index } => {
            write!(f, "{family}[")?;
            index.fmt_index(f, var)?;
            f.write_str("]")
        }
        Vertex::Inner { component, local } => {
            fmt_component(component, f, var)?;
            write!(f, ".{local}")
        }
        Vertex::Contracted(c) => {
            f.write_str("V[")?;
            fmt_component(c, f, var)?;
            f.write_str("]")
        }
    }
}

struct VertexDisplay<'a> {
    v: &'a SymVertex,
    var: &'a str,
}

impl fmt::Display for VertexDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_vertex(self.v, f, self.var)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_vertex(self, f, "")
    }
}

/// Symbolic vertices print with the loop variable `n`.
impl fmt::Display for SymVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_vertex(self, f, "n")
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_component(self, f, "")
    }
}

impl fmt::Display for ComponentId<Index> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_component(self, f, "n")
    }
}

/// Formats a vertex set as `{a, b, c}`.
pub fn fmt_set<'a, T: fmt::Display + 'a>(items: impl IntoIterator<Item = &'a T>) -> String {
    let parts: Vec<String> = items.into_iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_round_trip() {
        for s in ["X[3]", "Y@3.y", "Z#0.z", "V[Y@3]", "V[Z#12]", "V[7]"] {
            assert_eq!(Vertex::parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn symbolic_terms() {
        let t = SymVertex::parse_with("Y@n+2.y", Some("n")).unwrap();
        assert_eq!(t.at(3), Vertex::parse("Y@5.y").unwrap());
        assert_eq!(t.to_string(), "Y@n+2.y");
        assert_eq!(t.solve(&Vertex::parse("Y@5.y").unwrap()), Solve::At(3));
        assert_eq!(t.solve(&Vertex::parse("Y@1.y").unwrap()), Solve::Never);
        let h = SymVertex::parse_with("X[i]", Some("i")).unwrap();
        assert_eq!(h.display_with("i").to_string(), "X[i]");
        assert!(SymVertex::parse_with("X[n]", None).is_err());
    }

    #[test]
    fn rejects_garbage() {
        for s in ["X[", "3[1]", "Y@.y", "Y@1.", "plain", "X[i+]"] {
            assert!(SymVertex::parse_with(s, Some("i")).is_err(), "{s}");
        }
    }

    #[test]
    fn canonical_order_hosts_first() {
        let mut vs: Vec<Vertex> = ["Z#0.z", "V[Y@0]", "X[10]", "X[2]", "Y@1.y", "W[5]"]
            .iter()
            .map(|s| Vertex::parse(s).unwrap())
            .collect();
        vs.sort();
        let names: Vec<String> = vs.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["W[5]", "X[2]", "X[10]", "Y@1.y", "Z#0.z", "V[Y@0]"]);
    }
}

//! Machine-readable encoding of the direct constructions: base blocks,
//! development schemes, Cayley components and 1-factors, with a loader that
//! expands entries into designs.
//!
//! # Catalog grammar
//!
//! Line oriented, UTF-8, LF. `#` starts a comment. An entry is:
//!
//! ```text
//! entry hw v=24 m=3 n=4 alpha=9 beta=2        (or ihw ... / mhw ...)
//! vertexset Z8 x Z3 [inf 15]
//! [flagged <reason>]
//! [onefactor cayley (4,0) | onefactor levelpairs (0,+17,1) (2,+4,3)
//!   | onefactor explicit  followed by `edge` lines]
//! component kind=C3 count=6 [holey] scheme=<scheme> <scheme args>
//! cycle 0:0 6:0 0:1
//! ...
//! ```
//!
//! Vertices are `residue:level` or `inf:index`. Actions are written
//! `(+4 mod 8, +1 mod 3)` with a fixed coordinate spelled `-`. Schemes and
//! their arguments:
//!
//! * `FactorOrbit action=(..)` - cycles form an initial factor, one factor
//!   per translate; `count` must equal the recomputed orbit length.
//! * `TranslateTiling orbit=<len> action=(..)` - the orbits of all listed
//!   cycles together form one factor; `count=1`.
//! * `CosetTiling step=5 cosets=3 offsets=0,1,2,3,4` - factor for offset k
//!   is the base translated by `(step*j + k)_0`, j < cosets.
//! * `ExplicitTranslates translates=(0,0),(4,1),(0,2)` - one factor per
//!   translate of the initial factor.
//! * `TileThenOrbit action=(..) then=(..)` - tile one factor, then develop
//!   it; `count` = orbit length of the second action.
//! * `TileThenTranslates action=(..) translates=..` - tile one factor, then
//!   translate it explicitly.
//! * `CayleyDifference diff=(10,0)` - the single-difference factor; no
//!   cycle lines.
//! * `Lemma21 a=1 i=1` - the five-factor Cayley factorization; no cycle
//!   lines; `count=5`.
//!
//! `holey` marks a factor family as holey with respect to the infinity
//! block (used by incomplete designs). One file per source construction so
//! each datum stays diff-able.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::cayley::{self, CayleyLemmaParams, DifferenceFactor};
use crate::core::{
    Cycle, Design, Edge, Factor, Hole, OneFactor, Provenance, Role, Shape, Vertex,
    VertexSetDescriptor,
};
use crate::develop::{self, CoordinateAction, DevelopmentScheme, Shift, Translation};

/// Embedded catalog data, one file per source construction.
pub const CATALOG_FILES: &[(&str, &str)] = &[
    ("lemma_2_3.hwcat", include_str!("../data/lemma_2_3.hwcat")),
    ("lemma_3_1.hwcat", include_str!("../data/lemma_3_1.hwcat")),
    ("lemma_3_2.hwcat", include_str!("../data/lemma_3_2.hwcat")),
    ("lemma_3_3.hwcat", include_str!("../data/lemma_3_3.hwcat")),
    ("lemma_4_1.hwcat", include_str!("../data/lemma_4_1.hwcat")),
    ("lemma_4_2.hwcat", include_str!("../data/lemma_4_2.hwcat")),
    ("lemma_4_5.hwcat", include_str!("../data/lemma_4_5.hwcat")),
    ("lemma_5_1.hwcat", include_str!("../data/lemma_5_1.hwcat")),
    ("lemma_5_5.hwcat", include_str!("../data/lemma_5_5.hwcat")),
    ("table_1.hwcat", include_str!("../data/table_1.hwcat")),
    ("table_2.hwcat", include_str!("../data/table_2.hwcat")),
    ("table_3.hwcat", include_str!("../data/table_3.hwcat")),
    ("table_4.hwcat", include_str!("../data/table_4.hwcat")),
];

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{file}:{line}: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("{entry}: component {index} ({kind}): {source}")]
    Expansion {
        entry: String,
        index: usize,
        kind: String,
        source: crate::error::DevelopError,
    },
    #[error("{entry}: {msg}")]
    Entry { entry: String, msg: String },
    #[error("duplicate catalog key {0}")]
    DuplicateKey(String),
}

/// How one component of an entry is produced.
#[derive(Clone, Debug)]
pub enum ComponentRule {
    Scheme(DevelopmentScheme),
    CayleyDifference((u16, u16)),
    Lemma21 { a: u16, i: u16 },
}

#[derive(Clone, Debug)]
pub struct Component {
    pub target_length: u16,
    pub count: usize,
    pub holey: bool,
    pub rule: ComponentRule,
}

#[derive(Clone, Debug)]
pub enum OneFactorSpec {
    Cayley((u16, u16)),
    Explicit(Vec<Edge>),
    /// Edges `{(i_a, (i+d)_b)}` for each listed `(a, d, b)`, i over Z_u.
    LevelPairs(Vec<(u16, u16, u16)>),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub key: Shape,
    pub descriptor: VertexSetDescriptor,
    pub components: Vec<Component>,
    pub one_factor: Option<OneFactorSpec>,
    /// Suspected erratum in the source data; expansion is expected to fail
    /// verification and the entry is exempt from certification.
    pub flagged: Option<String>,
    pub source: String,
}

/// Stable text form of a catalog key, used in reports and cache filenames.
pub fn key_string(shape: &Shape) -> String {
    match *shape {
        Shape::Hw { v, m, n, alpha, beta } => format!("hw v={v} m={m} n={n} alpha={alpha} beta={beta}"),
        Shape::Ihw { v, h, m, n, alpha, beta, alpha_h, beta_h } => format!(
            "ihw v={v} h={h} m={m} n={n} alpha={alpha} beta={beta} alphah={alpha_h} betah={beta_h}"
        ),
        Shape::Mhw { g, u, m, n, alpha, beta } => {
            format!("mhw g={g} u={u} m={m} n={n} alpha={alpha} beta={beta}")
        }
        Shape::Frame { g, u, m, n, alpha, beta } => {
            format!("frame g={g} u={u} m={m} n={n} alpha={alpha} beta={beta}")
        }
    }
}

pub struct Catalog {
    entries: BTreeMap<String, CatalogEntry>,
}

impl fmt::Debug for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Catalog({} entries)", self.entries.len())
    }
}

static CATALOG: OnceLock<Catalog> = OnceLock::new();

/// The built-in catalog, parsed once from the embedded data files.
pub fn catalog() -> &'static Catalog {
    CATALOG.get_or_init(|| {
        Catalog::parse_files(CATALOG_FILES).expect("embedded catalog data must parse")
    })
}

impl Catalog {
    pub fn parse_files(files: &[(&str, &str)]) -> Result<Self, CatalogError> {
        let mut entries = BTreeMap::new();
        for (name, text) in files {
            for entry in parse_file(name, text)? {
                let key = key_string(&entry.key);
                if entries.insert(key.clone(), entry).is_some() {
                    return Err(CatalogError::DuplicateKey(key));
                }
            }
        }
        Ok(Catalog { entries })
    }

    /// Exact-match retrieval; `None` means no direct construction exists for
    /// the key.
    pub fn lookup(&self, key: &Shape) -> Option<&CatalogEntry> {
        self.entries.get(&key_string(key))
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Expand an entry into a design. The result is NOT certified here; the
/// verifier decides whether it is a genuine decomposition.
pub fn expand_entry(entry: &CatalogEntry) -> Result<Design, CatalogError> {
    let descriptor = entry.descriptor;
    let (m, n) = (entry.key.m(), entry.key.n());
    let mut factors: Vec<(Role, Factor)> = Vec::new();
    for (index, comp) in entry.components.iter().enumerate() {
        let hole = if comp.holey {
            Some(Hole::InfinityBlock)
        } else {
            None
        };
        let produced: Vec<Factor> = match &comp.rule {
            ComponentRule::Scheme(scheme) => {
                develop::expand(scheme, &descriptor, comp.target_length, hole).map_err(|e| {
                    CatalogError::Expansion {
                        entry: key_string(&entry.key),
                        index,
                        kind: format!("C{}", comp.target_length),
                        source: e,
                    }
                })?
            }
            ComponentRule::CayleyDifference(d) => {
                match cayley::single_difference_factor(&descriptor, *d) {
                    Ok(DifferenceFactor::Cycles(f)) if !comp.holey => vec![f],
                    Ok(DifferenceFactor::Cycles(f)) => {
                        // The difference factor lives on the labelled
                        // vertices only; for an incomplete design that is
                        // exactly the non-hole span, so re-wrap it as holey.
                        let cycles = f.cycles().to_vec();
                        vec![Factor::new(f.target_length, hole, cycles, &descriptor)
                            .map_err(|e| CatalogError::Entry {
                                entry: key_string(&entry.key),
                                msg: e.to_string(),
                            })?]
                    }
                    Ok(DifferenceFactor::Matching(_)) => {
                        return Err(CatalogError::Entry {
                            entry: key_string(&entry.key),
                            msg: format!("difference {d:?} yields a 1-factor, not a cycle factor"),
                        })
                    }
                    Err(e) => {
                        return Err(CatalogError::Entry {
                            entry: key_string(&entry.key),
                            msg: e.to_string(),
                        })
                    }
                }
            }
            ComponentRule::Lemma21 { a, i } => {
                let params = CayleyLemmaParams {
                    u: descriptor.u,
                    k: descriptor.k,
                    a: *a,
                    i: *i,
                };
                cayley::lemma_2_1_factorization(&params).map_err(|e| CatalogError::Entry {
                    entry: key_string(&entry.key),
                    msg: e.to_string(),
                })?
            }
        };
        if produced.len() != comp.count {
            return Err(CatalogError::Entry {
                entry: key_string(&entry.key),
                msg: format!(
                    "component {index} declared count {} but produced {}",
                    comp.count,
                    produced.len()
                ),
            });
        }
        for f in produced {
            if f.target_length != comp.target_length {
                return Err(CatalogError::Entry {
                    entry: key_string(&entry.key),
                    msg: format!("component {index} produced C{}", f.target_length),
                });
            }
            let role = role_for(comp.target_length, m, n).ok_or_else(|| CatalogError::Entry {
                entry: key_string(&entry.key),
                msg: format!("component length {} is neither m nor n", comp.target_length),
            })?;
            factors.push((role, f));
        }
    }

    let one_factor = match &entry.one_factor {
        None => None,
        Some(spec) => Some(expand_one_factor(spec, &entry.key, &descriptor)?),
    };

    Ok(Design {
        descriptor,
        shape: entry.key,
        factors,
        one_factor,
        provenance: Provenance::Catalog {
            entry: entry.source.clone(),
        },
    })
}

fn role_for(len: u16, m: u16, n: u16) -> Option<Role> {
    if len == m {
        Some(Role::M)
    } else if len == n {
        Some(Role::N)
    } else {
        None
    }
}

fn expand_one_factor(
    spec: &OneFactorSpec,
    key: &Shape,
    descriptor: &VertexSetDescriptor,
) -> Result<OneFactor, CatalogError> {
    let entry_err = |msg: String| CatalogError::Entry {
        entry: key_string(key),
        msg,
    };
    let span = key
        .one_factor_span(descriptor)
        .ok_or_else(|| entry_err("shape admits no 1-factor".into()))?;
    match spec {
        OneFactorSpec::Cayley(d) => match cayley::single_difference_factor(descriptor, *d) {
            Ok(DifferenceFactor::Matching(of)) => Ok(of),
            Ok(DifferenceFactor::Cycles(_)) => {
                Err(entry_err(format!("difference {d:?} is not self-inverse")))
            }
            Err(e) => Err(entry_err(e.to_string())),
        },
        OneFactorSpec::Explicit(edges) => {
            OneFactor::new(edges.clone(), &span).map_err(|e| entry_err(e.to_string()))
        }
        OneFactorSpec::LevelPairs(rules) => {
            let mut edges = Vec::new();
            for &(la, d, lb) in rules {
                for i in 0..descriptor.u {
                    let a = Vertex::labeled(i, la);
                    let b = Vertex::labeled((i + d) % descriptor.u, lb);
                    edges.push(Edge::new(a, b).map_err(|e| entry_err(e.to_string()))?);
                }
            }
            OneFactor::new(edges, &span).map_err(|e| entry_err(e.to_string()))
        }
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct LineCtx<'a> {
    file: &'a str,
    line: usize,
}

impl LineCtx<'_> {
    fn err(&self, msg: impl Into<String>) -> CatalogError {
        CatalogError::Parse {
            file: self.file.to_string(),
            line: self.line,
            msg: msg.into(),
        }
    }
}

fn parse_file(file: &str, text: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut entries: Vec<CatalogEntry> = Vec::new();
    let mut current: Option<CatalogEntry> = None;
    for (idx, raw) in text.lines().enumerate() {
        let ctx = LineCtx { file, line: idx + 1 };
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (directive, rest) = match line.split_once(char::is_whitespace) {
            Some((d, r)) => (d, r.trim()),
            None => (line, ""),
        };
        match directive {
            "entry" => {
                if let Some(e) = current.take() {
                    entries.push(finish_entry(e, &ctx)?);
                }
                current = Some(parse_entry_header(rest, &ctx, file)?);
            }
            "vertexset" => {
                let e = current.as_mut().ok_or_else(|| ctx.err("vertexset before entry"))?;
                e.descriptor = parse_vertexset(rest, &ctx)?;
            }
            "flagged" => {
                let e = current.as_mut().ok_or_else(|| ctx.err("flagged before entry"))?;
                e.flagged = Some(rest.to_string());
            }
            "onefactor" => {
                let e = current.as_mut().ok_or_else(|| ctx.err("onefactor before entry"))?;
                e.one_factor = Some(parse_one_factor(rest, &ctx)?);
            }
            "edge" => {
                let e = current.as_mut().ok_or_else(|| ctx.err("edge before entry"))?;
                let mut verts = Vec::new();
                for tok in rest.split_whitespace() {
                    verts.push(parse_vertex(tok, &ctx)?);
                }
                if verts.len() != 2 {
                    return Err(ctx.err("edge needs exactly two vertices"));
                }
                match e.one_factor {
                    Some(OneFactorSpec::Explicit(ref mut edges)) => {
                        edges.push(Edge::new(verts[0], verts[1]).map_err(|er| ctx.err(er.to_string()))?);
                    }
                    _ => return Err(ctx.err("edge outside `onefactor explicit`")),
                }
            }
            "component" => {
                let e = current.as_mut().ok_or_else(|| ctx.err("component before entry"))?;
                let comp = parse_component(rest, &ctx)?;
                e.components.push(comp);
            }
            "cycle" => {
                let e = current.as_mut().ok_or_else(|| ctx.err("cycle before entry"))?;
                let comp = e
                    .components
                    .last_mut()
                    .ok_or_else(|| ctx.err("cycle before any component"))?;
                let mut verts = Vec::new();
                for tok in rest.split_whitespace() {
                    verts.push(parse_vertex(tok, &ctx)?);
                }
                let cycle = Cycle::new(verts).map_err(|er| ctx.err(er.to_string()))?;
                match &mut comp.rule {
                    ComponentRule::Scheme(s) => scheme_push_cycle(s, cycle),
                    _ => return Err(ctx.err("cycle lines are only valid for scheme components")),
                }
            }
            other => return Err(ctx.err(format!("unknown directive `{other}`"))),
        }
    }
    if let Some(e) = current.take() {
        let ctx = LineCtx {
            file,
            line: text.lines().count(),
        };
        entries.push(finish_entry(e, &ctx)?);
    }
    Ok(entries)
}

fn finish_entry(entry: CatalogEntry, ctx: &LineCtx) -> Result<CatalogEntry, CatalogError> {
    // Component counts must add up to the header.
    let (m, n) = (entry.key.m(), entry.key.n());
    let mut full = BTreeMap::from([(Role::M, 0u32), (Role::N, 0u32)]);
    let mut holey = BTreeMap::from([(Role::M, 0u32), (Role::N, 0u32)]);
    for c in &entry.components {
        let role = role_for(c.target_length, m, n)
            .ok_or_else(|| ctx.err(format!("component kind C{} matches neither m nor n", c.target_length)))?;
        *if c.holey { &mut holey } else { &mut full }
            .get_mut(&role)
            .unwrap() += c.count as u32;
        if let ComponentRule::Scheme(s) = &c.rule {
            if scheme_base_len(s) == 0 {
                return Err(ctx.err("scheme component with no cycle lines"));
            }
            if s.factor_count() != c.count {
                return Err(ctx.err(format!(
                    "count={} but scheme produces {}",
                    c.count,
                    s.factor_count()
                )));
            }
        }
    }
    let want = match entry.key {
        Shape::Hw { alpha, beta, .. } | Shape::Mhw { alpha, beta, .. } => {
            [(Role::M, alpha, false), (Role::N, beta, false)].to_vec()
        }
        Shape::Ihw { alpha, beta, alpha_h, beta_h, .. } => [
            (Role::M, alpha, false),
            (Role::N, beta, false),
            (Role::M, alpha_h, true),
            (Role::N, beta_h, true),
        ]
        .to_vec(),
        Shape::Frame { .. } => return Err(ctx.err("frame entries are not supported in the catalog")),
    };
    for (role, count, is_holey) in want {
        let got = if is_holey { holey[&role] } else { full[&role] };
        if got != count {
            return Err(ctx.err(format!(
                "{} declares {count} {}{:?}-factors but components supply {got}",
                key_string(&entry.key),
                if is_holey { "holey " } else { "" },
                role,
            )));
        }
    }
    Ok(entry)
}

fn scheme_push_cycle(s: &mut DevelopmentScheme, cycle: Cycle) {
    match s {
        DevelopmentScheme::FactorOrbit { base, .. }
        | DevelopmentScheme::TranslateTiling { base, .. }
        | DevelopmentScheme::CosetTiling { base, .. }
        | DevelopmentScheme::ExplicitTranslates { base, .. }
        | DevelopmentScheme::TileThenOrbit { base, .. }
        | DevelopmentScheme::TileThenTranslates { base, .. } => base.push(cycle),
    }
}

fn scheme_base_len(s: &DevelopmentScheme) -> usize {
    match s {
        DevelopmentScheme::FactorOrbit { base, .. }
        | DevelopmentScheme::TranslateTiling { base, .. }
        | DevelopmentScheme::CosetTiling { base, .. }
        | DevelopmentScheme::ExplicitTranslates { base, .. }
        | DevelopmentScheme::TileThenOrbit { base, .. }
        | DevelopmentScheme::TileThenTranslates { base, .. } => base.len(),
    }
}

fn parse_entry_header(rest: &str, ctx: &LineCtx, file: &str) -> Result<CatalogEntry, CatalogError> {
    let (shape_kind, attrs_text) = rest
        .split_once(char::is_whitespace)
        .ok_or_else(|| ctx.err("entry needs a shape and key fields"))?;
    let attrs = parse_attrs(attrs_text, ctx)?;
    let get = |k: &str| -> Result<u32, CatalogError> {
        attrs
            .get(k)
            .ok_or_else(|| ctx.err(format!("missing {k}=")))?
            .parse::<u32>()
            .map_err(|_| ctx.err(format!("bad {k}=")))
    };
    let key = match shape_kind {
        "hw" => Shape::Hw {
            v: get("v")?,
            m: get("m")? as u16,
            n: get("n")? as u16,
            alpha: get("alpha")?,
            beta: get("beta")?,
        },
        "ihw" => Shape::Ihw {
            v: get("v")?,
            h: get("h")?,
            m: get("m")? as u16,
            n: get("n")? as u16,
            alpha: get("alpha")?,
            beta: get("beta")?,
            alpha_h: get("alphah")?,
            beta_h: get("betah")?,
        },
        "mhw" => Shape::Mhw {
            g: get("g")?,
            u: get("u")?,
            m: get("m")? as u16,
            n: get("n")? as u16,
            alpha: get("alpha")?,
            beta: get("beta")?,
        },
        other => return Err(ctx.err(format!("unknown shape `{other}`"))),
    };
    Ok(CatalogEntry {
        key,
        descriptor: VertexSetDescriptor::new(0, 0, 0),
        components: Vec::new(),
        one_factor: None,
        flagged: None,
        source: format!("{file}: {}", key_string(&key)),
    })
}

fn parse_vertexset(rest: &str, ctx: &LineCtx) -> Result<VertexSetDescriptor, CatalogError> {
    // `Z8 x Z3` optionally followed by `inf 15`.
    let toks: Vec<&str> = rest.split_whitespace().collect();
    if toks.len() != 3 && toks.len() != 5 {
        return Err(ctx.err("vertexset Z<u> x Z<k> [inf <c>]"));
    }
    let parse_z = |t: &str| -> Result<u16, CatalogError> {
        t.strip_prefix('Z')
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| ctx.err(format!("bad modulus `{t}`")))
    };
    if toks[1] != "x" {
        return Err(ctx.err("vertexset Z<u> x Z<k>"));
    }
    let u = parse_z(toks[0])?;
    let k = parse_z(toks[2])?;
    let infinity_count = if toks.len() == 5 {
        if toks[3] != "inf" {
            return Err(ctx.err("expected `inf <c>`"));
        }
        toks[4]
            .parse()
            .map_err(|_| ctx.err("bad infinity count"))?
    } else {
        0
    };
    Ok(VertexSetDescriptor::new(u, k, infinity_count))
}

fn parse_one_factor(rest: &str, ctx: &LineCtx) -> Result<OneFactorSpec, CatalogError> {
    let (kind, arg) = match rest.split_once(char::is_whitespace) {
        Some((k, a)) => (k, a.trim()),
        None => (rest, ""),
    };
    match kind {
        "cayley" => Ok(OneFactorSpec::Cayley(parse_pair(arg, ctx)?)),
        "explicit" => Ok(OneFactorSpec::Explicit(Vec::new())),
        "levelpairs" => {
            let mut rules = Vec::new();
            for tok in arg.split_whitespace() {
                let inner = tok
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| ctx.err(format!("bad levelpair `{tok}`")))?;
                let parts: Vec<&str> = inner.split(',').collect();
                if parts.len() != 3 {
                    return Err(ctx.err(format!("bad levelpair `{tok}`")));
                }
                let la = parts[0].parse().map_err(|_| ctx.err("bad level"))?;
                let d = parts[1]
                    .strip_prefix('+')
                    .unwrap_or(parts[1])
                    .parse()
                    .map_err(|_| ctx.err("bad shift"))?;
                let lb = parts[2].parse().map_err(|_| ctx.err("bad level"))?;
                rules.push((la, d, lb));
            }
            if rules.is_empty() {
                return Err(ctx.err("levelpairs needs at least one rule"));
            }
            Ok(OneFactorSpec::LevelPairs(rules))
        }
        other => Err(ctx.err(format!("unknown onefactor kind `{other}`"))),
    }
}

fn parse_component(rest: &str, ctx: &LineCtx) -> Result<Component, CatalogError> {
    let attrs = parse_attrs(rest, ctx)?;
    let kind = attrs
        .get("kind")
        .ok_or_else(|| ctx.err("component needs kind="))?;
    let target_length: u16 = kind
        .strip_prefix('C')
        .and_then(|x| x.parse().ok())
        .ok_or_else(|| ctx.err(format!("bad kind `{kind}`")))?;
    let count: usize = attrs
        .get("count")
        .ok_or_else(|| ctx.err("component needs count="))?
        .parse()
        .map_err(|_| ctx.err("bad count="))?;
    let holey = attrs.contains_key("holey");
    let scheme_name = attrs
        .get("scheme")
        .ok_or_else(|| ctx.err("component needs scheme="))?;
    let action = |key: &str| -> Result<CoordinateAction, CatalogError> {
        parse_action(
            attrs.get(key).ok_or_else(|| ctx.err(format!("missing {key}=")))?,
            ctx,
        )
    };
    let translates = || -> Result<Vec<Translation>, CatalogError> {
        parse_translates(
            attrs
                .get("translates")
                .ok_or_else(|| ctx.err("missing translates="))?,
            ctx,
        )
    };
    let rule = match scheme_name.as_str() {
        "FactorOrbit" => ComponentRule::Scheme(DevelopmentScheme::FactorOrbit {
            base: Vec::new(),
            action: action("action")?,
            orbit_length: count,
        }),
        "TranslateTiling" => ComponentRule::Scheme(DevelopmentScheme::TranslateTiling {
            base: Vec::new(),
            action: action("action")?,
            orbit_length: attrs
                .get("orbit")
                .ok_or_else(|| ctx.err("TranslateTiling needs orbit=<declared length>"))?
                .parse()
                .map_err(|_| ctx.err("bad orbit="))?,
        }),
        "CosetTiling" => {
            let step = attrs
                .get("step")
                .ok_or_else(|| ctx.err("missing step="))?
                .parse()
                .map_err(|_| ctx.err("bad step="))?;
            let cosets = attrs
                .get("cosets")
                .ok_or_else(|| ctx.err("missing cosets="))?
                .parse()
                .map_err(|_| ctx.err("bad cosets="))?;
            let offsets = attrs
                .get("offsets")
                .ok_or_else(|| ctx.err("missing offsets="))?
                .split(',')
                .map(|t| t.parse::<u16>().map_err(|_| ctx.err("bad offsets=")))
                .collect::<Result<Vec<_>, _>>()?;
            ComponentRule::Scheme(DevelopmentScheme::CosetTiling {
                base: Vec::new(),
                step,
                cosets,
                offsets,
            })
        }
        "ExplicitTranslates" => ComponentRule::Scheme(DevelopmentScheme::ExplicitTranslates {
            base: Vec::new(),
            translates: translates()?,
        }),
        "TileThenOrbit" => ComponentRule::Scheme(DevelopmentScheme::TileThenOrbit {
            base: Vec::new(),
            tiling: action("action")?,
            orbit: action("then")?,
            orbit_length: count,
        }),
        "TileThenTranslates" => ComponentRule::Scheme(DevelopmentScheme::TileThenTranslates {
            base: Vec::new(),
            tiling: action("action")?,
            translates: translates()?,
        }),
        "CayleyDifference" => ComponentRule::CayleyDifference(parse_pair(
            attrs.get("diff").ok_or_else(|| ctx.err("missing diff="))?,
            ctx,
        )?),
        "Lemma21" => ComponentRule::Lemma21 {
            a: attrs
                .get("a")
                .ok_or_else(|| ctx.err("missing a="))?
                .parse()
                .map_err(|_| ctx.err("bad a="))?,
            i: attrs
                .get("i")
                .ok_or_else(|| ctx.err("missing i="))?
                .parse()
                .map_err(|_| ctx.err("bad i="))?,
        },
        other => return Err(ctx.err(format!("unknown scheme `{other}`"))),
    };
    if matches!(rule, ComponentRule::Lemma21 { .. }) && count != 5 {
        return Err(ctx.err("Lemma21 components produce exactly 5 factors"));
    }
    if matches!(rule, ComponentRule::CayleyDifference(_)) && count != 1 {
        return Err(ctx.err("CayleyDifference components produce exactly 1 factor"));
    }
    Ok(Component {
        target_length,
        count,
        holey,
        rule,
    })
}

fn parse_pair(text: &str, ctx: &LineCtx) -> Result<(u16, u16), CatalogError> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| ctx.err(format!("expected (a,b), got `{text}`")))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| ctx.err(format!("expected (a,b), got `{text}`")))?;
    Ok((
        a.trim().parse().map_err(|_| ctx.err("bad pair"))?,
        b.trim().parse().map_err(|_| ctx.err("bad pair"))?,
    ))
}

fn parse_translates(text: &str, ctx: &LineCtx) -> Result<Vec<Translation>, CatalogError> {
    // `(0,0),(4,1),(0,2)` with no internal spaces.
    let mut out = Vec::new();
    for tok in text.split("),(") {
        let tok = tok.trim_start_matches('(').trim_end_matches(')');
        let (a, b) = tok
            .split_once(',')
            .ok_or_else(|| ctx.err(format!("bad translate `{tok}`")))?;
        out.push((
            a.parse().map_err(|_| ctx.err("bad translate"))?,
            b.parse().map_err(|_| ctx.err("bad translate"))?,
        ));
    }
    if out.is_empty() {
        return Err(ctx.err("translates= needs at least one element"));
    }
    Ok(out)
}

/// `(+4 mod 8, +1 mod 3)` with a fixed coordinate written `-`.
fn parse_action(text: &str, ctx: &LineCtx) -> Result<CoordinateAction, CatalogError> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| ctx.err(format!("bad action `{text}`")))?;
    let (first, second) = inner
        .split_once(',')
        .ok_or_else(|| ctx.err(format!("bad action `{text}`")))?;
    let parse_shift = |t: &str| -> Result<Shift, CatalogError> {
        let t = t.trim();
        if t == "-" {
            return Ok(Shift::Fix);
        }
        let t = t.strip_prefix('+').ok_or_else(|| ctx.err(format!("bad shift `{t}`")))?;
        let (step, _modulus) = t
            .split_once(" mod ")
            .ok_or_else(|| ctx.err(format!("bad shift `{t}`")))?;
        Ok(Shift::Add(
            step.trim().parse().map_err(|_| ctx.err("bad step"))?,
        ))
    };
    Ok(CoordinateAction::new(parse_shift(first)?, parse_shift(second)?))
}

/// key=value attribute scanner; parenthesized values may contain spaces.
/// Bare words (no `=`) become flags mapped to an empty value.
fn parse_attrs(text: &str, ctx: &LineCtx) -> Result<BTreeMap<String, String>, CatalogError> {
    let mut attrs = BTreeMap::new();
    let mut tokens: Vec<String> = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.checked_sub(1).ok_or_else(|| ctx.err("unbalanced parens"))?;
                cur.push(ch);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if depth != 0 {
        return Err(ctx.err("unbalanced parens"));
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    for tok in tokens {
        match tok.split_once('=') {
            Some((k, v)) => {
                attrs.insert(k.to_string(), v.to_string());
            }
            None => {
                attrs.insert(tok, String::new());
            }
        }
    }
    Ok(attrs)
}

fn parse_vertex(tok: &str, ctx: &LineCtx) -> Result<Vertex, CatalogError> {
    let (a, b) = tok
        .split_once(':')
        .ok_or_else(|| ctx.err(format!("bad vertex `{tok}`")))?;
    if a == "inf" {
        Ok(Vertex::infinity(
            b.parse().map_err(|_| ctx.err("bad infinity index"))?,
        ))
    } else {
        Ok(Vertex::labeled(
            a.parse().map_err(|_| ctx.err("bad residue"))?,
            b.parse().map_err(|_| ctx.err("bad level"))?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_design;

    #[test]
    fn parse_and_expand_minimal_entry() {
        let text = "\
# toy: one C_3-factor tiling Z_7 x Z_3, for grammar coverage only
entry hw v=21 m=3 n=7 alpha=1 beta=0
vertexset Z7 x Z3
component kind=C3 count=1 scheme=TranslateTiling orbit=7 action=(+1 mod 7, -)
cycle 0:0 1:1 2:2
";
        let entries = parse_file("toy.hwcat", text).unwrap();
        assert_eq!(entries.len(), 1);
        let design = expand_entry(&entries[0]).unwrap();
        assert_eq!(design.factors.len(), 1);
        // Not a complete decomposition of K_21, so the verifier must say no.
        assert!(!verify_design(&design).pass);
    }

    #[test]
    fn count_mismatch_rejected_at_parse() {
        let text = "\
entry hw v=21 m=3 n=7 alpha=2 beta=0
vertexset Z7 x Z3
component kind=C3 count=1 scheme=TranslateTiling orbit=7 action=(+1 mod 7, -)
cycle 0:0 1:1 2:2
";
        assert!(parse_file("toy.hwcat", text).is_err());
    }

    #[test]
    fn builtin_catalog_parses_with_unique_keys() {
        let cat = catalog();
        assert!(cat.len() >= 60, "catalog has {} entries", cat.len());
    }

    #[test]
    fn lookup_misses_are_absent_not_errors() {
        // Built by a recursive construction in the source, so not a direct
        // catalog entry.
        let key = Shape::Hw { v: 30, m: 3, n: 5, alpha: 10, beta: 4 };
        assert!(catalog().lookup(&key).is_none());
    }
}

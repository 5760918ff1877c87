use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::kg::{Iri, Term};

use super::QueryError;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref().trim_start_matches('?');
        assert!(!name.is_empty(), "variable name must be non-empty");
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternTerm {
    Var(Var),
    Term(Term),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(Var::new(name))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }
}

impl From<Var> for PatternTerm {
    fn from(v: Var) -> Self {
        PatternTerm::Var(v)
    }
}

impl From<Iri> for PatternTerm {
    fn from(iri: Iri) -> Self {
        PatternTerm::Term(Term::Iri(iri))
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Term(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    /// Fails if a literal is placed in subject or predicate position.
    pub fn new(
        subject: impl Into<PatternTerm>,
        predicate: impl Into<PatternTerm>,
        object: impl Into<PatternTerm>,
    ) -> Result<Self, QueryError> {
        let tp = TriplePattern {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        };
        for (pos, t) in [("subject", &tp.subject), ("predicate", &tp.predicate)] {
            if let PatternTerm::Term(Term::Literal(_)) = t {
                return Err(QueryError::LiteralPosition(pos));
            }
        }
        Ok(tp)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .filter_map(PatternTerm::as_var)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    In(Var, Vec<Iri>),
    NotEquals(Var, Var),
}

impl Condition {
    pub fn vars(&self) -> Vec<&Var> {
        match self {
            Condition::In(v, _) => vec![v],
            Condition::NotEquals(a, b) => vec![a, b],
        }
    }

    /// Unbound variables make the condition false.
    pub fn holds(&self, binding: &Binding) -> bool {
        match self {
            Condition::In(v, allowed) => binding
                .get(v)
                .and_then(Term::as_iri)
                .is_some_and(|iri| allowed.contains(iri)),
            Condition::NotEquals(a, b) => match (binding.get(a), binding.get(b)) {
                (Some(x), Some(y)) => x != y,
                _ => false,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphPattern {
    Bgp(Vec<TriplePattern>),
    Union(Box<GraphPattern>, Box<GraphPattern>),
    Join(Vec<GraphPattern>),
    Filter(Condition, Box<GraphPattern>),
}

impl GraphPattern {
    pub fn union(left: GraphPattern, right: GraphPattern) -> Self {
        GraphPattern::Union(Box::new(left), Box::new(right))
    }

    pub fn filter(condition: Condition, inner: GraphPattern) -> Self {
        GraphPattern::Filter(condition, Box::new(inner))
    }

    /// Variables bound in every solution of this pattern.
    pub fn certain_vars(&self) -> BTreeSet<Var> {
        match self {
            GraphPattern::Bgp(tps) => tps.iter().flat_map(|tp| tp.vars().cloned()).collect(),
            GraphPattern::Union(l, r) => {
                let l = l.certain_vars();
                r.certain_vars().intersection(&l).cloned().collect()
            }
            GraphPattern::Join(ps) => ps.iter().flat_map(|p| p.certain_vars()).collect(),
            GraphPattern::Filter(_, inner) => inner.certain_vars(),
        }
    }

    /// Every filter only mentions variables its inner pattern always binds.
    pub fn check_filters(&self) -> Result<(), QueryError> {
        match self {
            GraphPattern::Bgp(_) => Ok(()),
            GraphPattern::Union(l, r) => {
                l.check_filters()?;
                r.check_filters()
            }
            GraphPattern::Join(ps) => ps.iter().try_for_each(GraphPattern::check_filters),
            GraphPattern::Filter(cond, inner) => {
                inner.check_filters()?;
                let bound = inner.certain_vars();
                match cond.vars().into_iter().find(|v| !bound.contains(*v)) {
                    Some(v) => Err(QueryError::UnboundFilterVar(v.clone())),
                    None => Ok(()),
                }
            }
        }
    }

    /// Total count of triple patterns, including those inside union branches.
    pub fn triple_pattern_count(&self) -> usize {
        match self {
            GraphPattern::Bgp(tps) => tps.len(),
            GraphPattern::Union(l, r) => l.triple_pattern_count() + r.triple_pattern_count(),
            GraphPattern::Join(ps) => ps.iter().map(GraphPattern::triple_pattern_count).sum(),
            GraphPattern::Filter(_, inner) => inner.triple_pattern_count(),
        }
    }

    pub fn union_count(&self) -> usize {
        match self {
            GraphPattern::Bgp(_) => 0,
            GraphPattern::Union(l, r) => 1 + l.union_count() + r.union_count(),
            GraphPattern::Join(ps) => ps.iter().map(GraphPattern::union_count).sum(),
            GraphPattern::Filter(_, inner) => inner.union_count(),
        }
    }

    pub fn filter_count(&self) -> usize {
        match self {
            GraphPattern::Bgp(_) => 0,
            GraphPattern::Union(l, r) => l.filter_count() + r.filter_count(),
            GraphPattern::Join(ps) => ps.iter().map(GraphPattern::filter_count).sum(),
            GraphPattern::Filter(_, inner) => 1 + inner.filter_count(),
        }
    }
}

/// A variable assignment. Ordered so result sets iterate deterministically.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binding(BTreeMap<Var, Term>);

impl Binding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.0.get(v)
    }

    /// Looks a variable up by name.
    pub fn get_named(&self, name: &str) -> Option<&Term> {
        self.0.get(&Var::new(name))
    }

    pub fn iri(&self, name: &str) -> Option<&Iri> {
        self.get_named(name).and_then(Term::as_iri)
    }

    pub fn insert(&mut self, v: Var, t: Term) -> Option<Term> {
        self.0.insert(v, t)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    pub fn project(&self, vars: &[Var]) -> Binding {
        Binding(
            vars.iter()
                .filter_map(|v| self.0.get(v).map(|t| (v.clone(), t.clone())))
                .collect(),
        )
    }
}

impl FromIterator<(Var, Term)> for Binding {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        Binding(iter.into_iter().collect())
    }
}

/// A pattern together with its projection, checked at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pattern: GraphPattern,
    projection: Vec<Var>,
}

impl Query {
    pub fn new(pattern: GraphPattern, projection: Vec<Var>) -> Result<Self, QueryError> {
        pattern.check_filters()?;
        let bound = pattern.certain_vars();
        if let Some(v) = projection.iter().find(|v| !bound.contains(*v)) {
            return Err(QueryError::UnboundProjection(v.clone()));
        }
        let mut seen = BTreeSet::new();
        if let Some(v) = projection.iter().find(|v| !seen.insert(*v)) {
            return Err(QueryError::DuplicateProjection(v.clone()));
        }
        Ok(Query {
            pattern,
            projection,
        })
    }

    pub fn pattern(&self) -> &GraphPattern {
        &self.pattern
    }

    pub fn projection(&self) -> &[Var] {
        &self.projection
    }
}

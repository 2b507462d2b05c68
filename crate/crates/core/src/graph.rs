//! Temporal interaction multigraph, time windows, and the simple directed
//! projection every metric is computed on.
//!
//! A [`TemporalGraph`] is an append-only, timestamp-ordered multiset of
//! [`Interaction`]s. Slicing it with [`TemporalGraph::window`] yields a
//! [`GraphWindow`] over a half-open interval, and [`GraphWindow::project`]
//! collapses that window into a [`SimpleDigraph`]: parallel interactions are
//! deduplicated into one arc and original-tweet self-loops are kept out of the
//! arc set (they only feed the per-user origin index).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Datelike, TimeZone, Timelike, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Record-level faults that make an interaction unacceptable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InteractionFault {
    TweetNotSelfLoop,
    SelfLoopNotTweet,
    RetweetWithoutTweetId,
}

impl fmt::Display for InteractionFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InteractionFault::TweetNotSelfLoop => "tweet must be a self-loop (source = target)",
            InteractionFault::SelfLoopNotTweet => "only tweet records may be self-loops",
            InteractionFault::RetweetWithoutTweetId => "retweet is missing a tweet_id",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("user handle is empty")]
    EmptyHandle,
    #[error("{}{fault}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    InvalidInteraction {
        fault: InteractionFault,
        line: Option<usize>,
    },
    #[error("invalid interval: start {start} is not before end {end}")]
    InvalidInterval {
        start: DateTime<Utc>,
        end: DateTime<Utc>,
    },
}

impl GraphError {
    /// Attaches an input line number to a record-level error.
    pub fn at_line(self, line: usize) -> Self {
        match self {
            GraphError::InvalidInteraction { fault, .. } => GraphError::InvalidInteraction {
                fault,
                line: Some(line),
            },
            other => other,
        }
    }
}

/// Case-normalized user handle.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct UserId(String);

/// Trims surrounding whitespace and lowercases. Idempotent.
pub fn normalize_handle(raw: &str) -> String {
    raw.trim().to_lowercase().trim().to_string()
}

impl UserId {
    pub fn new(raw: &str) -> Result<Self, GraphError> {
        let handle = normalize_handle(raw);
        if handle.is_empty() {
            return Err(GraphError::EmptyHandle);
        }
        Ok(UserId(handle))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for UserId {
    type Error = GraphError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        UserId::new(&value)
    }
}

impl From<UserId> for String {
    fn from(value: UserId) -> Self {
        value.0
    }
}

impl FromStr for UserId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        UserId::new(s)
    }
}

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InteractionKind {
    Tweet,
    Retweet,
    Mention,
    Reply,
}

impl InteractionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InteractionKind::Tweet => "tweet",
            InteractionKind::Retweet => "retweet",
            InteractionKind::Mention => "mention",
            InteractionKind::Reply => "reply",
        }
    }
}

impl fmt::Display for InteractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown kind {0:?}")]
pub struct UnknownKind(pub String);

impl FromStr for InteractionKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tweet" => Ok(InteractionKind::Tweet),
            "retweet" => Ok(InteractionKind::Retweet),
            "mention" => Ok(InteractionKind::Mention),
            "reply" => Ok(InteractionKind::Reply),
            _ => Err(UnknownKind(s.to_string())),
        }
    }
}

/// One timestamped directed event between two users.
///
/// Original tweets are encoded as self-loops (`source == target`, kind
/// [`InteractionKind::Tweet`]); every other kind connects two distinct users.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interaction {
    source: UserId,
    target: UserId,
    kind: InteractionKind,
    tweet_id: Option<String>,
    timestamp: DateTime<Utc>,
}

impl Interaction {
    /// Builds a validated interaction. The timestamp is truncated to whole
    /// seconds. A retweet without `tweet_id` is accepted here; strict graphs
    /// reject it on insertion.
    pub fn new(
        source: UserId,
        target: UserId,
        kind: InteractionKind,
        tweet_id: Option<String>,
        timestamp: DateTime<Utc>,
    ) -> Result<Self, GraphError> {
        let tweet_id = tweet_id
            .map(|t| t.trim().to_string())
            .filter(|t| !t.is_empty());
        let interaction = Interaction {
            source,
            target,
            kind,
            tweet_id,
            timestamp: truncate_to_second(timestamp),
        };
        if let Some(fault) = interaction.fault(false) {
            return Err(GraphError::InvalidInteraction { fault, line: None });
        }
        Ok(interaction)
    }

    /// An original tweet (self-loop).
    pub fn tweet(user: UserId, tweet_id: Option<String>, timestamp: DateTime<Utc>) -> Self {
        Interaction::new(
            user.clone(),
            user,
            InteractionKind::Tweet,
            tweet_id,
            timestamp,
        )
        .expect("a tweet self-loop is always valid")
    }

    fn fault(&self, strict: bool) -> Option<InteractionFault> {
        let self_loop = self.source == self.target;
        match self.kind {
            InteractionKind::Tweet if !self_loop => Some(InteractionFault::TweetNotSelfLoop),
            InteractionKind::Tweet => None,
            _ if self_loop => Some(InteractionFault::SelfLoopNotTweet),
            InteractionKind::Retweet if strict && self.tweet_id.is_none() => {
                Some(InteractionFault::RetweetWithoutTweetId)
            }
            _ => None,
        }
    }

    pub fn source(&self) -> &UserId {
        &self.source
    }

    pub fn target(&self) -> &UserId {
        &self.target
    }

    pub fn kind(&self) -> InteractionKind {
        self.kind
    }

    pub fn tweet_id(&self) -> Option<&str> {
        self.tweet_id.as_deref()
    }

    pub fn timestamp(&self) -> DateTime<Utc> {
        self.timestamp
    }

    /// Whether the record can take part in the information-bridge motif.
    pub fn is_motif_eligible(&self) -> bool {
        self.kind == InteractionKind::Retweet && self.tweet_id.is_some()
    }
}

fn truncate_to_second(t: DateTime<Utc>) -> DateTime<Utc> {
    t.with_nanosecond(0).unwrap_or(t)
}

/// Half-open time interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
}

impl Interval {
    pub fn new(start: DateTime<Utc>, end: DateTime<Utc>) -> Result<Self, GraphError> {
        if start >= end {
            return Err(GraphError::InvalidInterval { start, end });
        }
        Ok(Interval { start, end })
    }

    /// The interval covering every representable instant.
    pub fn unbounded() -> Self {
        Interval {
            start: DateTime::<Utc>::MIN_UTC,
            end: DateTime::<Utc>::MAX_UTC,
        }
    }

    pub fn contains(&self, t: DateTime<Utc>) -> bool {
        self.start <= t && t < self.end
    }

    /// The calendar month (UTC) containing `t`.
    pub fn month_of(t: DateTime<Utc>) -> Self {
        let start = Utc
            .with_ymd_and_hms(t.year(), t.month(), 1, 0, 0, 0)
            .single()
            .expect("first of month is unambiguous in UTC");
        Interval {
            start,
            end: next_month_start(start),
        }
    }

    pub fn is_calendar_month(&self) -> bool {
        Interval::month_of(self.start) == *self
    }

    /// File-name friendly label: `YYYY-MM` for calendar months, otherwise
    /// `YYYYMMDDTHHMMSS_YYYYMMDDTHHMMSS`.
    pub fn label(&self) -> String {
        if self.is_calendar_month() {
            self.start.format("%Y-%m").to_string()
        } else {
            format!(
                "{}_{}",
                self.start.format("%Y%m%dT%H%M%S"),
                self.end.format("%Y%m%dT%H%M%S")
            )
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {})",
            self.start
                .to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            self.end.to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
        )
    }
}

pub(crate) fn next_month_start(month_start: DateTime<Utc>) -> DateTime<Utc> {
    let (y, m) = if month_start.month() == 12 {
        (month_start.year() + 1, 1)
    } else {
        (month_start.year(), month_start.month() + 1)
    };
    Utc.with_ymd_and_hms(y, m, 1, 0, 0, 0)
        .single()
        .expect("first of month is unambiguous in UTC")
}

/// Append-only, timestamp-ordered multiset of interactions.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TemporalGraph {
    interactions: Vec<Interaction>,
    nodes: BTreeSet<UserId>,
    strict: bool,
}

impl TemporalGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// A graph that rejects retweets lacking a tweet id.
    pub fn strict() -> Self {
        TemporalGraph {
            strict: true,
            ..Self::default()
        }
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// Builds a lenient graph from any sequence of interactions.
    pub fn from_interactions<I>(interactions: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Interaction>,
    {
        let mut g = TemporalGraph::new();
        g.extend(interactions)?;
        Ok(g)
    }

    /// Inserts one interaction, keeping timestamp order (ties keep insertion
    /// order).
    pub fn add_interaction(&mut self, interaction: Interaction) -> Result<(), GraphError> {
        if let Some(fault) = interaction.fault(self.strict) {
            return Err(GraphError::InvalidInteraction { fault, line: None });
        }
        self.nodes.insert(interaction.source.clone());
        self.nodes.insert(interaction.target.clone());
        let at = match self.interactions.last() {
            Some(last) if last.timestamp > interaction.timestamp => self
                .interactions
                .partition_point(|x| x.timestamp <= interaction.timestamp),
            _ => self.interactions.len(),
        };
        self.interactions.insert(at, interaction);
        Ok(())
    }

    /// Bulk insertion; all-or-nothing on validation failure.
    pub fn extend<I>(&mut self, interactions: I) -> Result<(), GraphError>
    where
        I: IntoIterator<Item = Interaction>,
    {
        let batch: Vec<Interaction> = interactions.into_iter().collect();
        if let Some(fault) = batch.iter().find_map(|i| i.fault(self.strict)) {
            return Err(GraphError::InvalidInteraction { fault, line: None });
        }
        for i in &batch {
            self.nodes.insert(i.source.clone());
            self.nodes.insert(i.target.clone());
        }
        self.interactions.extend(batch);
        // stable: equal timestamps keep insertion order
        self.interactions.sort_by_key(|i| i.timestamp);
        Ok(())
    }

    pub fn interactions(&self) -> &[Interaction] {
        &self.interactions
    }

    pub fn nodes(&self) -> &BTreeSet<UserId> {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.interactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interactions.is_empty()
    }

    /// `(min, max)` interaction timestamps; `None` for an empty graph.
    pub fn span(&self) -> Option<(DateTime<Utc>, DateTime<Utc>)> {
        Some((
            self.interactions.first()?.timestamp,
            self.interactions.last()?.timestamp,
        ))
    }

    pub fn window(
        &self,
        start: DateTime<Utc>,
        end: DateTime<Utc>,
    ) -> Result<GraphWindow<'_>, GraphError> {
        Ok(self.window_over(Interval::new(start, end)?))
    }

    pub fn window_over(&self, interval: Interval) -> GraphWindow<'_> {
        let lo = self
            .interactions
            .partition_point(|i| i.timestamp < interval.start);
        let hi = self
            .interactions
            .partition_point(|i| i.timestamp < interval.end);
        GraphWindow {
            parent: self,
            interval,
            interactions: &self.interactions[lo..hi.max(lo)],
        }
    }

    /// The whole graph as a single window.
    pub fn full_window(&self) -> GraphWindow<'_> {
        GraphWindow {
            parent: self,
            interval: Interval::unbounded(),
            interactions: &self.interactions,
        }
    }
}

/// The interactions of a [`TemporalGraph`] inside a half-open interval.
#[derive(Debug, Clone, Copy)]
pub struct GraphWindow<'g> {
    parent: &'g TemporalGraph,
    interval: Interval,
    interactions: &'g [Interaction],
}

impl<'g> GraphWindow<'g> {
    pub fn parent(&self) -> &'g TemporalGraph {
        self.parent
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn interactions(&self) -> &'g [Interaction] {
        self.interactions
    }

    pub fn len(&self) -> usize {
        self.interactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interactions.is_empty()
    }

    pub fn project(&self) -> SimpleDigraph {
        SimpleDigraph::from_interactions(self.interval, self.interactions)
    }
}

/// Free-function form of [`GraphWindow::project`].
pub fn project(window: &GraphWindow<'_>) -> SimpleDigraph {
    window.project()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degree {
    #[serde(rename = "in")]
    pub in_degree: usize,
    #[serde(rename = "out")]
    pub out_degree: usize,
}

/// Deduplicated directed graph of one window.
///
/// Nodes are stored in ascending [`UserId`] order and addressed by their
/// position; adjacency lists are sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleDigraph {
    interval: Interval,
    nodes: Vec<UserId>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    // raw interaction count behind each out arc, parallel to `out_adj`
    out_weight: Vec<Vec<u32>>,
    origin: BTreeMap<UserId, DateTime<Utc>>,
}

impl SimpleDigraph {
    fn from_interactions(interval: Interval, interactions: &[Interaction]) -> Self {
        let mut users: BTreeSet<&UserId> = BTreeSet::new();
        let mut origin: BTreeMap<UserId, DateTime<Utc>> = BTreeMap::new();
        let mut pairs: BTreeMap<(&UserId, &UserId), u32> = BTreeMap::new();
        for i in interactions {
            users.insert(&i.source);
            users.insert(&i.target);
            if i.kind == InteractionKind::Tweet {
                origin
                    .entry(i.source.clone())
                    .and_modify(|t| *t = (*t).min(i.timestamp))
                    .or_insert(i.timestamp);
            } else {
                *pairs.entry((&i.source, &i.target)).or_insert(0) += 1;
            }
        }
        let nodes: Vec<UserId> = users.into_iter().cloned().collect();
        let mut g = SimpleDigraph::empty(interval, nodes);
        // BTreeMap order gives sorted adjacency for free
        for ((s, t), w) in pairs {
            let (s, t) = (g.index_of(s).unwrap(), g.index_of(t).unwrap());
            g.out_adj[s].push(t);
            g.out_weight[s].push(w);
            g.in_adj[t].push(s);
        }
        for list in &mut g.in_adj {
            list.sort_unstable();
        }
        g.origin = origin;
        g
    }

    fn empty(interval: Interval, nodes: Vec<UserId>) -> Self {
        let n = nodes.len();
        SimpleDigraph {
            interval,
            nodes,
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            out_weight: vec![Vec::new(); n],
            origin: BTreeMap::new(),
        }
    }

    /// Builds a digraph directly from a node list and arcs. Self-arcs and
    /// repeated arcs are dropped; arc endpoints missing from `nodes` are added.
    pub fn from_arcs<I, A>(nodes: I, arcs: A) -> Self
    where
        I: IntoIterator<Item = UserId>,
        A: IntoIterator<Item = (UserId, UserId)>,
    {
        let mut set: BTreeSet<UserId> = nodes.into_iter().collect();
        let arcs: BTreeSet<(UserId, UserId)> = arcs.into_iter().filter(|(s, t)| s != t).collect();
        for (s, t) in &arcs {
            set.insert(s.clone());
            set.insert(t.clone());
        }
        let mut g = SimpleDigraph::empty(Interval::unbounded(), set.into_iter().collect());
        for (s, t) in &arcs {
            let (s, t) = (g.index_of(s).unwrap(), g.index_of(t).unwrap());
            g.out_adj[s].push(t);
            g.out_weight[s].push(1);
            g.in_adj[t].push(s);
        }
        for list in &mut g.in_adj {
            list.sort_unstable();
        }
        g
    }

    /// Replaces the origin index (earliest original tweet per user).
    pub fn with_origins<I>(mut self, origins: I) -> Self
    where
        I: IntoIterator<Item = (UserId, DateTime<Utc>)>,
    {
        self.origin = origins
            .into_iter()
            .filter(|(u, _)| self.index_of(u).is_some())
            .collect();
        self
    }

    pub fn with_interval(mut self, interval: Interval) -> Self {
        self.interval = interval;
        self
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    pub fn nodes(&self) -> &[UserId] {
        &self.nodes
    }

    pub fn user(&self, index: usize) -> &UserId {
        &self.nodes[index]
    }

    pub fn index_of(&self, user: &UserId) -> Option<usize> {
        self.nodes.binary_search(user).ok()
    }

    pub fn contains(&self, user: &UserId) -> bool {
        self.index_of(user).is_some()
    }

    pub fn out_neighbors(&self, index: usize) -> &[usize] {
        &self.out_adj[index]
    }

    pub fn in_neighbors(&self, index: usize) -> &[usize] {
        &self.in_adj[index]
    }

    pub fn out_degree(&self, index: usize) -> usize {
        self.out_adj[index].len()
    }

    pub fn in_degree(&self, index: usize) -> usize {
        self.in_adj[index].len()
    }

    pub fn has_arc(&self, source: usize, target: usize) -> bool {
        self.out_adj[source].binary_search(&target).is_ok()
    }

    /// Arcs as index pairs in ascending `(source, target)` order.
    pub fn arc_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(s, ts)| ts.iter().map(move |&t| (s, t)))
    }

    pub fn arcs(&self) -> impl Iterator<Item = (&UserId, &UserId)> + '_ {
        self.arc_indices()
            .map(|(s, t)| (&self.nodes[s], &self.nodes[t]))
    }

    /// Raw number of interactions behind the arc, 0 if there is no arc.
    pub fn arc_weight(&self, source: usize, target: usize) -> u32 {
        match self.out_adj[source].binary_search(&target) {
            Ok(k) => self.out_weight[source][k],
            Err(_) => 0,
        }
    }

    /// Raw non-tweet interactions touching the node, in either direction.
    pub fn interaction_weight(&self, index: usize) -> u64 {
        let out: u64 = self.out_weight[index].iter().map(|&w| w as u64).sum();
        let inc: u64 = self.in_adj[index]
            .iter()
            .map(|&s| self.arc_weight(s, index) as u64)
            .sum();
        out + inc
    }

    /// Earliest original-tweet timestamp per user in this window.
    pub fn origin_index(&self) -> &BTreeMap<UserId, DateTime<Utc>> {
        &self.origin
    }

    /// Sorted neighbor lists of the undirected projection.
    pub fn undirected_adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.node_count())
            .map(|v| merge_sorted(&self.out_adj[v], &self.in_adj[v]))
            .collect()
    }

    pub fn degrees(&self) -> BTreeMap<UserId, Degree> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, u)| {
                (
                    u.clone(),
                    Degree {
                        in_degree: self.in_degree(i),
                        out_degree: self.out_degree(i),
                    },
                )
            })
            .collect()
    }
}

/// Unique-counterparty in/out degree of every node; isolates map to `(0, 0)`.
pub fn degrees(d: &SimpleDigraph) -> BTreeMap<UserId, Degree> {
    d.degrees()
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(&x), Some(&y)) if x > y => {
                j += 1;
                y
            }
            (Some(&x), Some(_)) => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

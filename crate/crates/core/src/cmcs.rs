//! Conditional Markov Chain Search.
//!
//! A configuration is a small set of components plus two successor tables:
//! one consulted after a component improved the solution, one after it did
//! not. The executor starts at the configured component, applies it, picks
//! the next component from the table matching the outcome, and so on until
//! the budget runs out. Every change is kept; the best solution seen is
//! returned.

use std::fmt;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::components::{apply_component, ClusterOptimiser, ComponentKind, ComponentOutcome};
use crate::error::ConfigError;
use crate::instance::Instance;
use crate::solution::Solution;

/// Successor rule for one (component, outcome) pair.
#[derive(Debug, Clone, PartialEq)]
pub enum Transition {
    /// Always continue with the component at this index.
    To(usize),
    /// Continue with index `i` with probability `p` for each `(i, p)`.
    Weighted(Vec<(usize, f64)>),
}

impl Transition {
    fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match self {
            Transition::To(i) => *i,
            Transition::Weighted(dist) => {
                let mut x: f64 = rng.random();
                for &(i, p) in dist {
                    if x < p {
                        return i;
                    }
                    x -= p;
                }
                dist.last().map(|&(i, _)| i).unwrap_or(0)
            }
        }
    }

    fn targets(&self) -> Vec<usize> {
        match self {
            Transition::To(i) => vec![*i],
            Transition::Weighted(d) => d
                .iter()
                .filter(|(_, p)| *p > 0.0)
                .map(|&(i, _)| i)
                .collect(),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self, Transition::To(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub name: String,
    pub components: Vec<ComponentKind>,
    pub start: usize,
    pub on_improved: Vec<Transition>,
    pub on_unimproved: Vec<Transition>,
}

impl Configuration {
    /// Deterministic configuration from successor indices.
    pub fn deterministic(
        name: impl Into<String>,
        components: Vec<ComponentKind>,
        start: usize,
        on_improved: &[usize],
        on_unimproved: &[usize],
    ) -> Self {
        Configuration {
            name: name.into(),
            components,
            start,
            on_improved: on_improved.iter().map(|&i| Transition::To(i)).collect(),
            on_unimproved: on_unimproved.iter().map(|&i| Transition::To(i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_deterministic(&self) -> bool {
        self.on_improved
            .iter()
            .chain(&self.on_unimproved)
            .all(Transition::is_deterministic)
    }

    /// Index of the component that follows `current`.
    pub fn successor<R: Rng + ?Sized>(&self, current: usize, improved: bool, rng: &mut R) -> usize {
        if improved {
            self.on_improved[current].pick(rng)
        } else {
            self.on_unimproved[current].pick(rng)
        }
    }

    /// Components reachable from the start through either table.
    pub fn reachable(&self) -> Vec<bool> {
        let k = self.len();
        let mut seen = vec![false; k];
        if self.start >= k {
            return seen;
        }
        let mut stack = vec![self.start];
        seen[self.start] = true;
        while let Some(c) = stack.pop() {
            for t in [&self.on_improved[c], &self.on_unimproved[c]] {
                for s in t.targets() {
                    if s < k && !seen[s] {
                        seen[s] = true;
                        stack.push(s);
                    }
                }
            }
        }
        seen
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let k = self.len();
        if k == 0 {
            return Err(ConfigError::Empty);
        }
        for (i, c) in self.components.iter().enumerate() {
            if self.components[..i].contains(c) {
                return Err(ConfigError::DuplicateComponent(c.to_string()));
            }
        }
        if self.start >= k {
            return Err(ConfigError::BadStart(self.start));
        }
        if self.on_improved.len() != k || self.on_unimproved.len() != k {
            return Err(ConfigError::Syntax {
                line: 0,
                msg: "successor tables must have one row per component".into(),
            });
        }
        for (from, t) in self
            .on_improved
            .iter()
            .chain(&self.on_unimproved)
            .enumerate()
        {
            let from = from % k;
            match t {
                Transition::To(s) if *s >= k => {
                    return Err(ConfigError::BadSuccessor { from, succ: *s })
                }
                Transition::Weighted(d) => {
                    if let Some(&(s, _)) = d.iter().find(|(s, _)| *s >= k) {
                        return Err(ConfigError::BadSuccessor { from, succ: s });
                    }
                    let total: f64 = d.iter().map(|(_, p)| p).sum();
                    if d.iter().any(|(_, p)| *p < 0.0) || (total - 1.0).abs() > 1e-9 {
                        return Err(ConfigError::BadDistribution(from));
                    }
                }
                _ => {}
            }
        }
        if let Some(i) = self.reachable().iter().position(|r| !r) {
            return Err(ConfigError::Unreachable(self.components[i].to_string()));
        }
        Ok(())
    }

    fn transition_text(&self, t: &Transition) -> String {
        match t {
            Transition::To(i) => self.components[*i].to_string(),
            Transition::Weighted(d) => d
                .iter()
                .map(|(i, p)| format!("{}={p}", self.components[*i]))
                .collect::<Vec<_>>()
                .join(","),
        }
    }

    /// Human-readable one-line summary, e.g. `CO*>IHC|IHC IHC>CO|VM VM>IHC|CO`
    /// (start marked with `*`, then the improved and unimproved successors).
    pub fn describe(&self) -> String {
        self.components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                format!(
                    "{c}{}>{}|{}",
                    if i == self.start { "*" } else { "" },
                    self.transition_text(&self.on_improved[i]),
                    self.transition_text(&self.on_unimproved[i])
                )
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Serializes to the flat configuration text format.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "name {}\nstart {}\n",
            self.name, self.components[self.start]
        );
        for (i, c) in self.components.iter().enumerate() {
            out.push_str(&format!(
                "{c} {} {}\n",
                self.transition_text(&self.on_improved[i]),
                self.transition_text(&self.on_unimproved[i])
            ));
        }
        out
    }

    /// Parses the configuration text format:
    ///
    /// ```text
    /// # comment
    /// name conf1
    /// start CO
    /// CO  IHC IHC        # component, successor if improved, if not
    /// IHC CO  VM
    /// VM  IHC CO
    /// ```
    ///
    /// A successor may also be a distribution such as `IHC=0.25,VM=0.75`.
    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut name = String::from("unnamed");
        let mut start_name: Option<(usize, String)> = None;
        let mut rows: Vec<(usize, ComponentKind, String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["name", n] => name = n.to_string(),
                ["start", s] => start_name = Some((lineno, s.to_string())),
                [c, imp, unimp] => {
                    let kind = c
                        .parse::<ComponentKind>()
                        .map_err(ConfigError::UnknownComponent)?;
                    rows.push((lineno, kind, imp.to_string(), unimp.to_string()));
                }
                _ => {
                    return Err(ConfigError::Syntax {
                        line: lineno,
                        msg: format!("unrecognised record {line:?}"),
                    })
                }
            }
        }
        let components: Vec<ComponentKind> = rows.iter().map(|r| r.1).collect();
        let index_of = |tok: &str, line: usize| -> Result<usize, ConfigError> {
            let kind = tok
                .parse::<ComponentKind>()
                .map_err(ConfigError::UnknownComponent)?;
            components
                .iter()
                .position(|&k| k == kind)
                .ok_or_else(|| ConfigError::Syntax {
                    line,
                    msg: format!("successor {tok} is not a listed component"),
                })
        };
        let transition = |tok: &str, line: usize| -> Result<Transition, ConfigError> {
            if !tok.contains('=') {
                return Ok(Transition::To(index_of(tok, line)?));
            }
            tok.split(',')
                .map(|part| {
                    let (c, p) = part.split_once('=').ok_or_else(|| ConfigError::Syntax {
                        line,
                        msg: format!("bad distribution entry {part:?}"),
                    })?;
                    let p: f64 = p.parse().map_err(|_| ConfigError::Syntax {
                        line,
                        msg: format!("bad probability {p:?}"),
                    })?;
                    Ok((index_of(c, line)?, p))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Transition::Weighted)
        };
        let mut on_improved = Vec::with_capacity(rows.len());
        let mut on_unimproved = Vec::with_capacity(rows.len());
        for (line, _, imp, unimp) in &rows {
            on_improved.push(transition(imp, *line)?);
            on_unimproved.push(transition(unimp, *line)?);
        }
        let (line, s) = start_name.ok_or(ConfigError::MissingStart)?;
        if components.is_empty() {
            return Err(ConfigError::Empty);
        }
        let start = index_of(&s, line)?;
        let config = Configuration {
            name,
            components,
            start,
            on_improved,
            on_unimproved,
        };
        config.validate()?;
        Ok(config)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.name, self.describe())
    }
}

use ComponentKind::{CO, IHC, VM};

/// Configuration trained on the Medium testbed.
pub fn conf1() -> Configuration {
    // CO -> IHC always; IHC -> CO | VM; VM -> IHC | CO
    Configuration::deterministic("conf1", vec![CO, IHC, VM], 0, &[1, 0, 1], &[1, 2, 0])
}

/// Configuration trained on the Large testbed.
pub fn conf2() -> Configuration {
    // CO -> IHC always; IHC -> CO | VM; VM -> CO | IHC
    Configuration::deterministic("conf2", vec![CO, IHC, VM], 0, &[1, 0, 0], &[1, 2, 1])
}

/// Looks up a built-in configuration by name.
pub fn builtin(name: &str) -> Option<Configuration> {
    match name.to_ascii_lowercase().as_str() {
        "conf1" => Some(conf1()),
        "conf2" => Some(conf2()),
        _ => None,
    }
}

/// Time budget `alpha · n · m` in seconds.
pub fn compute_budget(n: usize, m: usize, alpha: f64) -> f64 {
    alpha * n as f64 * m as f64
}

/// Seconds with four decimals, as budgets are reported.
pub fn format_seconds(secs: f64) -> String {
    format!("{secs:.4}")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    WallClock(Duration),
    Iterations(u64),
}

impl Budget {
    pub fn seconds(secs: f64) -> Self {
        Budget::WallClock(Duration::from_secs_f64(secs))
    }

    pub fn from_alpha(instance: &Instance, alpha: f64) -> Self {
        Budget::seconds(compute_budget(instance.n(), instance.m(), alpha))
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub best_cost: i64,
    pub best_solution: Solution,
    pub iterations: u64,
    pub improvements: u64,
    pub elapsed: Duration,
}

/// One executed step, as passed to a run observer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub component: usize,
    pub kind: ComponentKind,
    pub outcome: ComponentOutcome,
    pub cost: i64,
}

/// Runs `config` from `initial` until `budget` is spent.
pub fn run<R: Rng + ?Sized>(
    config: &Configuration,
    instance: &Instance,
    initial: Solution,
    budget: Budget,
    rng: &mut R,
) -> RunResult {
    run_observed(config, instance, initial, budget, rng, |_| {})
}

/// Like [`run`], calling `observer` after every component application.
pub fn run_observed<R, F>(
    config: &Configuration,
    instance: &Instance,
    initial: Solution,
    budget: Budget,
    rng: &mut R,
    mut observer: F,
) -> RunResult
where
    R: Rng + ?Sized,
    F: FnMut(&Step),
{
    debug_assert!(config.validate().is_ok());
    let started = Instant::now();
    let mut optimiser = ClusterOptimiser::new();
    let mut best = initial.clone();
    let mut current = initial;
    let mut component = config.start;
    let mut iterations = 0u64;
    let mut improvements = 0u64;
    loop {
        let exhausted = match budget {
            Budget::Iterations(limit) => iterations >= limit,
            Budget::WallClock(limit) => started.elapsed() >= limit,
        };
        if exhausted {
            break;
        }
        let kind = config.components[component];
        let outcome = apply_component(kind, instance, &mut current, &mut optimiser, rng);
        iterations += 1;
        if outcome.improved {
            improvements += 1;
        }
        if current.cost() < best.cost() {
            best.copy_from(&current);
        }
        observer(&Step {
            component,
            kind,
            outcome,
            cost: current.cost(),
        });
        component = config.successor(component, outcome.improved, rng);
    }
    RunResult {
        best_cost: best.cost(),
        best_solution: best,
        iterations,
        improvements,
        elapsed: started.elapsed(),
    }
}

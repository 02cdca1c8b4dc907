//! The radius-`r` splitter game.
//!
//! Each round Connector picks `v` in the arena, Splitter answers with `w`
//! in the `r`-ball of `v`, and the arena shrinks to that ball minus `w`.
//! Splitter wins once the arena is empty.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{distances_avoiding, Bfs, Graph, LinearOrder};

/// The current arena: an induced subgraph of the host graph.
#[derive(Debug, Clone)]
pub struct Arena<'g> {
    g: &'g Graph,
    alive: Vec<bool>,
    size: usize,
}

impl<'g> Arena<'g> {
    pub fn full(g: &'g Graph) -> Self {
        Arena { g, alive: vec![true; g.n()], size: g.n() }
    }

    pub fn from_vertices(g: &'g Graph, vertices: &[usize]) -> Result<Self> {
        let mut alive = vec![false; g.n()];
        for &v in vertices {
            g.check_vertex(v)?;
            alive[v] = true;
        }
        let size = alive.iter().filter(|&&a| a).count();
        Ok(Arena { g, alive, size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.alive.len() && self.alive[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.alive.iter().enumerate().filter(|(_, &a)| a).map(|(v, _)| v)
    }

    /// `N_r(v)` inside the arena, sorted.
    pub fn ball(&self, v: usize, r: usize) -> Vec<usize> {
        let mut bfs = Bfs::new(self.g.n());
        let mut ball = bfs.run(self.g, v, r, |y| self.alive[y], |_| true).to_vec();
        ball.sort_unstable();
        ball
    }

    fn shrink_to(&mut self, ball: &[usize], removed: usize) {
        self.alive.iter_mut().for_each(|a| *a = false);
        for &x in ball {
            self.alive[x] = true;
        }
        self.alive[removed] = false;
        self.size = ball.len() - 1;
    }
}

pub trait Connector {
    fn name(&self) -> String;
    fn choose(&mut self, arena: &Arena<'_>, r: usize) -> usize;
}

pub trait Splitter {
    fn respond(&mut self, arena: &Arena<'_>, v: usize, r: usize) -> usize;
}

/// The `L`-minimum vertex of the `r`-ball of `v` in the arena.
pub fn splitter_move_wcol(arena: &Arena<'_>, v: usize, order: &LinearOrder, r: usize) -> Result<usize> {
    if !arena.contains(v) {
        return Err(Error::UnknownVertex(v));
    }
    Ok(arena.ball(v, r).into_iter().min_by_key(|&x| order.rank(x)).expect("ball contains v"))
}

/// Splitter strategy that always removes the order-minimum of the ball.
#[derive(Debug, Clone)]
pub struct WcolSplitter {
    pub order: LinearOrder,
}

impl Splitter for WcolSplitter {
    fn respond(&mut self, arena: &Arena<'_>, v: usize, r: usize) -> usize {
        splitter_move_wcol(arena, v, &self.order, r).unwrap_or(v)
    }
}

/// Picks the vertex with the largest `r`-ball, ties to the smallest id.
#[derive(Debug, Clone, Copy, Default)]
pub struct MaxBall;

impl Connector for MaxBall {
    fn name(&self) -> String {
        "max-ball".into()
    }

    fn choose(&mut self, arena: &Arena<'_>, r: usize) -> usize {
        arena
            .vertices()
            .map(|v| (arena.ball(v, r).len(), v))
            .min_by_key(|&(size, v)| (std::cmp::Reverse(size), v))
            .map(|(_, v)| v)
            .expect("arena is non-empty")
    }
}

/// Picks the smallest id.
#[derive(Debug, Clone, Copy, Default)]
pub struct First;

impl Connector for First {
    fn name(&self) -> String {
        "first".into()
    }

    fn choose(&mut self, arena: &Arena<'_>, _r: usize) -> usize {
        arena.vertices().next().expect("arena is non-empty")
    }
}

/// Picks uniformly at random from a seeded generator.
#[derive(Debug, Clone)]
pub struct RandomConnector {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomConnector {
    pub fn new(seed: u64) -> Self {
        RandomConnector { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Connector for RandomConnector {
    fn name(&self) -> String {
        format!("random({})", self.seed)
    }

    fn choose(&mut self, arena: &Arena<'_>, _r: usize) -> usize {
        let k = self.rng.gen_range(0..arena.size());
        arena.vertices().nth(k).expect("index below arena size")
    }
}

/// Connector strategy selector usable from configuration and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectorKind {
    MaxBall,
    First,
    Random(u64),
}

impl ConnectorKind {
    pub fn build(self) -> Box<dyn Connector> {
        match self {
            ConnectorKind::MaxBall => Box::new(MaxBall),
            ConnectorKind::First => Box::new(First),
            ConnectorKind::Random(seed) => Box::new(RandomConnector::new(seed)),
        }
    }
}

impl std::str::FromStr for ConnectorKind {
    type Err = String;

    /// `max-ball`, `first`, `random` (seed 0) or `random:SEED`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "max-ball" => Ok(ConnectorKind::MaxBall),
            "first" => Ok(ConnectorKind::First),
            "random" => Ok(ConnectorKind::Random(0)),
            _ => s
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(ConnectorKind::Random)
                .ok_or_else(|| format!("unknown connector `{s}` (max-ball, first, random[:SEED])")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    Splitter,
    Connector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub v: usize,
    pub w: usize,
    /// Arena size after the round.
    pub arena_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTranscript {
    pub r: usize,
    pub order_file: Option<String>,
    pub rounds: Vec<Round>,
    pub winner: Winner,
    pub rounds_used: usize,
}

pub fn play_game(
    g: &Graph,
    r: usize,
    splitter: &mut dyn Splitter,
    connector: &mut dyn Connector,
    round_cap: usize,
) -> Result<GameTranscript> {
    if round_cap == 0 {
        return Err(Error::Precondition("round cap must be at least 1".into()));
    }
    let mut arena = Arena::full(g);
    let mut rounds = Vec::new();
    while !arena.is_empty() && rounds.len() < round_cap {
        let round = rounds.len() + 1;
        let v = connector.choose(&arena, r);
        if !arena.contains(v) {
            return Err(Error::IllegalMove { round, msg: format!("connector picked {v}, which is not in the arena") });
        }
        let w = splitter.respond(&arena, v, r);
        let ball = arena.ball(v, r);
        if ball.binary_search(&w).is_err() {
            return Err(Error::IllegalMove { round, msg: format!("splitter picked {w}, outside the {r}-ball of {v}") });
        }
        arena.shrink_to(&ball, w);
        rounds.push(Round { v, w, arena_size: arena.size() });
    }
    let winner = if arena.is_empty() { Winner::Splitter } else { Winner::Connector };
    Ok(GameTranscript { r, order_file: None, rounds_used: rounds.len(), rounds, winner })
}

/// Replays a transcript from scratch and checks every move and arena size.
pub fn replay(g: &Graph, t: &GameTranscript) -> std::result::Result<(), String> {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut size = n;
    if t.rounds_used != t.rounds.len() {
        return Err(format!("rounds_used = {} but {} rounds listed", t.rounds_used, t.rounds.len()));
    }
    for (i, round) in t.rounds.iter().enumerate() {
        if size == 0 {
            return Err(format!("round {} played on an empty arena", i + 1));
        }
        if round.v >= n || !alive[round.v] {
            return Err(format!("round {}: v = {} not in arena", i + 1, round.v));
        }
        let blocked: Vec<bool> = alive.iter().map(|a| !a).collect();
        let dist = distances_avoiding(g, round.v, &blocked);
        let in_ball = |x: usize| alive[x] && dist[x].is_some_and(|d| d <= t.r);
        if round.w >= n || !in_ball(round.w) {
            return Err(format!("round {}: w = {} not in the ball of {}", i + 1, round.w, round.v));
        }
        let next: Vec<bool> = (0..n).map(|x| x != round.w && in_ball(x)).collect();
        alive = next;
        size = alive.iter().filter(|&&a| a).count();
        if size != round.arena_size {
            return Err(format!("round {}: arena size {} recorded, {} replayed", i + 1, round.arena_size, size));
        }
    }
    let expected = if size == 0 { Winner::Splitter } else { Winner::Connector };
    if expected != t.winner {
        return Err(format!("winner recorded as {:?}, replay gives {expected:?}", t.winner));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::*;

    #[test]
    fn splitter_moves() {
        let k1 = Graph::empty(1);
        assert_eq!(splitter_move_wcol(&Arena::full(&k1), 0, &LinearOrder::identity(1), 3).unwrap(), 0);
        // P3 a-b-c with b < a < c
        let p3 = path(3);
        let order = LinearOrder::from_sequence(vec![1, 0, 2]).unwrap();
        assert_eq!(splitter_move_wcol(&Arena::full(&p3), 0, &order, 1).unwrap(), 1);
        let c6 = cycle(6);
        assert_eq!(splitter_move_wcol(&Arena::full(&c6), 3, &LinearOrder::identity(6), 2).unwrap(), 1);
        let arena = Arena::from_vertices(&c6, &[2, 3]).unwrap();
        assert!(splitter_move_wcol(&arena, 0, &LinearOrder::identity(6), 1).is_err());
    }

    #[test]
    fn single_vertex_game() {
        let g = Graph::empty(1);
        let mut s = WcolSplitter { order: LinearOrder::identity(1) };
        let t = play_game(&g, 1, &mut s, &mut First, 1).unwrap();
        assert_eq!(t.rounds_used, 1);
        assert_eq!(t.winner, Winner::Splitter);
        replay(&g, &t).unwrap();
    }

    #[test]
    fn complete_graph_takes_n_rounds() {
        for n in 1..8 {
            let g = complete(n);
            for mut c in [ConnectorKind::MaxBall.build(), ConnectorKind::First.build(), ConnectorKind::Random(3).build()] {
                let mut s = WcolSplitter { order: LinearOrder::from_sequence((0..n).rev().collect()).unwrap() };
                let t = play_game(&g, 2, &mut s, c.as_mut(), n).unwrap();
                assert_eq!(t.rounds_used, n);
                assert_eq!(t.winner, Winner::Splitter);
                replay(&g, &t).unwrap();
            }
        }
    }

    #[test]
    fn cap_hands_win_to_connector() {
        let g = complete(4);
        let mut s = WcolSplitter { order: LinearOrder::identity(4) };
        let t = play_game(&g, 1, &mut s, &mut First, 2).unwrap();
        assert_eq!(t.winner, Winner::Connector);
        replay(&g, &t).unwrap();
        assert!(play_game(&g, 1, &mut s, &mut First, 0).is_err());
    }

    struct Cheat;
    impl Splitter for Cheat {
        fn respond(&mut self, _: &Arena<'_>, _: usize, _: usize) -> usize {
            4
        }
    }

    #[test]
    fn illegal_moves_abort() {
        let g = path(5);
        let err = play_game(&g, 1, &mut Cheat, &mut First, 5).unwrap_err();
        assert!(matches!(err, Error::IllegalMove { round: 1, .. }));
    }

    #[test]
    fn replay_rejects_tampering() {
        let g = cycle(6);
        let mut s = WcolSplitter { order: LinearOrder::identity(6) };
        let t = play_game(&g, 1, &mut s, &mut MaxBall, 6).unwrap();
        let mut bad = t.clone();
        bad.rounds[0].w = 3;
        assert!(replay(&g, &bad).is_err());
        let mut bad = t.clone();
        bad.rounds[0].arena_size += 1;
        assert!(replay(&g, &bad).is_err());
    }

    #[test]
    fn connector_parsing() {
        assert_eq!("random:7".parse::<ConnectorKind>().unwrap(), ConnectorKind::Random(7));
        assert_eq!("max-ball".parse::<ConnectorKind>().unwrap(), ConnectorKind::MaxBall);
        assert!("greedy".parse::<ConnectorKind>().is_err());
        assert_eq!(ConnectorKind::Random(4).build().name(), "random(4)");
    }
}

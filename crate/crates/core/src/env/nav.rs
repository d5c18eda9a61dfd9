//! Landmark-based navigation over a data-driven area map.
//!
//! The agent sees ten binary landmark detectors. Five are tied to the map
//! (Rock, Boat, Flower, Tree, Bush), the water detector is always on, and
//! four (Bird, Cow, Sun, Cloud) flip at random every step. Two motors move
//! the agent: east/stay/west and north/stay/south. Reward 100 arrives only
//! on entering the goal area.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::types::{FullAction, Observation};

use super::{EnvDescriptor, Environment, StepOutcome};

/// Landmarks the map controls, in detector order.
pub const LANDMARKS: [&str; 5] = ["Rock", "Boat", "Flower", "Tree", "Bush"];
pub const DETECTOR_WATER: usize = 5;
pub const NOISE_DETECTORS: [&str; 4] = ["Bird", "Cow", "Sun", "Cloud"];
pub const N_DETECTORS: usize = 10;

/// Motor 0 moves along x: east, stay, west. Motor 1 along y: north, stay,
/// south.
pub const MOTOR_RANGES: [usize; 2] = [3, 3];
pub const EW_EAST: usize = 0;
pub const EW_STAY: usize = 1;
pub const EW_WEST: usize = 2;
pub const NS_NORTH: usize = 0;
pub const NS_STAY: usize = 1;
pub const NS_SOUTH: usize = 2;

fn dx_symbol(value: usize) -> char {
    match value {
        EW_EAST => 'E',
        EW_STAY => '-',
        EW_WEST => 'W',
        _ => unreachable!("x motor value out of range"),
    }
}

fn dy_symbol(value: usize) -> char {
    match value {
        NS_NORTH => 'N',
        NS_STAY => '-',
        NS_SOUTH => 'S',
        _ => unreachable!("y motor value out of range"),
    }
}

fn parse_move_symbols(token: &str) -> Option<(usize, usize)> {
    let mut chars = token.chars();
    let dx = match chars.next()? {
        'E' => EW_EAST,
        '-' => EW_STAY,
        'W' => EW_WEST,
        _ => return None,
    };
    let dy = match chars.next()? {
        'N' => NS_NORTH,
        '-' => NS_STAY,
        'S' => NS_SOUTH,
        _ => return None,
    };
    if chars.next().is_some() {
        return None;
    }
    Some((dx, dy))
}

#[derive(Debug, Error, PartialEq)]
pub enum MapError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("map: {0}")]
    Structure(String),
}

fn line_err(line: usize, message: impl Into<String>) -> MapError {
    MapError::Line { line, message: message.into() }
}

/// One named area: which map landmarks it shows and where each move leads.
/// Moves not listed keep the agent in place.
#[derive(Debug, Clone, PartialEq)]
pub struct Area {
    pub name: String,
    /// Indices into [`LANDMARKS`].
    pub sees: Vec<usize>,
    /// (dx, dy) -> successor area index.
    pub moves: BTreeMap<(usize, usize), usize>,
}

/// A navigation world: areas, transitions, start, and goal.
#[derive(Debug, Clone, PartialEq)]
pub struct NavMap {
    pub areas: Vec<Area>,
    pub start: usize,
    pub goal: usize,
}

impl NavMap {
    /// Parses the line-oriented map format:
    ///
    /// ```text
    /// area <name> sees <landmark,...>   # or `area <name>` for no landmarks
    /// move <name> <dxdy> -> <name>      # dx in {E,-,W}, dy in {N,-,S}
    /// start <name>
    /// goal <name>
    /// ```
    pub fn parse(text: &str) -> Result<NavMap, MapError> {
        struct Pending {
            name: String,
            sees: Vec<usize>,
        }
        let mut areas: Vec<Pending> = Vec::new();
        let mut moves: Vec<(usize, String, (usize, usize), String)> = Vec::new();
        let mut start: Option<(usize, String)> = None;
        let mut goal: Option<(usize, String)> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            match tokens.next() {
                Some("area") => {
                    let name = tokens
                        .next()
                        .ok_or_else(|| line_err(line, "area needs a name"))?
                        .to_string();
                    if areas.iter().any(|a| a.name == name) {
                        return Err(line_err(line, format!("area {name} already declared")));
                    }
                    let mut sees = Vec::new();
                    match tokens.next() {
                        None => {}
                        Some("sees") => {
                            let list = tokens
                                .next()
                                .ok_or_else(|| line_err(line, "sees needs a landmark list"))?;
                            for item in list.split(',') {
                                let landmark = LANDMARKS
                                    .iter()
                                    .position(|&l| l == item)
                                    .ok_or_else(|| {
                                        line_err(line, format!("unknown landmark `{item}`"))
                                    })?;
                                if sees.contains(&landmark) {
                                    return Err(line_err(
                                        line,
                                        format!("landmark `{item}` repeated"),
                                    ));
                                }
                                sees.push(landmark);
                            }
                        }
                        Some(other) => {
                            return Err(line_err(line, format!("expected `sees`, got `{other}`")))
                        }
                    }
                    sees.sort_unstable();
                    areas.push(Pending { name, sees });
                }
                Some("move") => {
                    let from = tokens
                        .next()
                        .ok_or_else(|| line_err(line, "move needs a source area"))?;
                    let symbols = tokens
                        .next()
                        .ok_or_else(|| line_err(line, "move needs a direction"))?;
                    let (dx, dy) = parse_move_symbols(symbols)
                        .ok_or_else(|| line_err(line, format!("bad direction `{symbols}`")))?;
                    match tokens.next() {
                        Some("->") => {}
                        other => {
                            return Err(line_err(
                                line,
                                format!("expected `->`, got `{}`", other.unwrap_or("")),
                            ))
                        }
                    }
                    let to = tokens
                        .next()
                        .ok_or_else(|| line_err(line, "move needs a destination area"))?;
                    moves.push((line, from.to_string(), (dx, dy), to.to_string()));
                }
                Some("start") => {
                    let name =
                        tokens.next().ok_or_else(|| line_err(line, "start needs an area"))?;
                    if start.is_some() {
                        return Err(line_err(line, "start declared twice"));
                    }
                    start = Some((line, name.to_string()));
                }
                Some("goal") => {
                    let name = tokens.next().ok_or_else(|| line_err(line, "goal needs an area"))?;
                    if goal.is_some() {
                        return Err(line_err(line, "goal declared twice"));
                    }
                    goal = Some((line, name.to_string()));
                }
                Some(other) => {
                    return Err(line_err(line, format!("unknown directive `{other}`")));
                }
                None => unreachable!(),
            }
            if tokens.next().is_some() {
                return Err(line_err(line, "trailing tokens"));
            }
        }

        let find = |name: &str, line: usize| {
            areas
                .iter()
                .position(|a| a.name == name)
                .ok_or_else(|| line_err(line, format!("unknown area `{name}`")))
        };

        let mut built: Vec<Area> = areas
            .iter()
            .map(|p| Area { name: p.name.clone(), sees: p.sees.clone(), moves: BTreeMap::new() })
            .collect();
        for (line, from, step, to) in moves {
            let from_idx = find(&from, line)?;
            let to_idx = find(&to, line)?;
            if built[from_idx].moves.insert(step, to_idx).is_some() {
                return Err(line_err(line, "move declared twice for this direction"));
            }
        }

        let (start_line, start_name) =
            start.ok_or_else(|| MapError::Structure("missing start".into()))?;
        let (goal_line, goal_name) =
            goal.ok_or_else(|| MapError::Structure("missing goal".into()))?;
        let start = find(&start_name, start_line)?;
        let goal = find(&goal_name, goal_line)?;

        let map = NavMap { areas: built, start, goal };
        map.validate()?;
        Ok(map)
    }

    fn validate(&self) -> Result<(), MapError> {
        if self.shortest_path_length().is_none() {
            return Err(MapError::Structure("goal not reachable from start".into()));
        }
        Ok(())
    }

    /// Breadth-first distance from start to goal, in moves.
    pub fn shortest_path_length(&self) -> Option<usize> {
        let mut seen = HashSet::from([self.start]);
        let mut queue = VecDeque::from([(self.start, 0usize)]);
        while let Some((area, dist)) = queue.pop_front() {
            if area == self.goal {
                return Some(dist);
            }
            for &next in self.areas[area].moves.values() {
                if seen.insert(next) {
                    queue.push_back((next, dist + 1));
                }
            }
        }
        None
    }

    /// Renders the map in canonical form (areas first, then moves, then
    /// start and goal).
    pub fn render(&self) -> String {
        let mut out = String::new();
        for area in &self.areas {
            if area.sees.is_empty() {
                writeln!(out, "area {}", area.name).unwrap();
            } else {
                let list: Vec<&str> = area.sees.iter().map(|&l| LANDMARKS[l]).collect();
                writeln!(out, "area {} sees {}", area.name, list.join(",")).unwrap();
            }
        }
        for area in &self.areas {
            for (&(dx, dy), &to) in &area.moves {
                writeln!(
                    out,
                    "move {} {}{} -> {}",
                    area.name,
                    dx_symbol(dx),
                    dy_symbol(dy),
                    self.areas[to].name
                )
                .unwrap();
            }
        }
        writeln!(out, "start {}", self.areas[self.start].name).unwrap();
        writeln!(out, "goal {}", self.areas[self.goal].name).unwrap();
        out
    }

    /// The built-in world: seven areas around a lake plus the goal. Three
    /// moves separate the start from the goal.
    pub fn builtin() -> NavMap {
        NavMap::parse(DEFAULT_MAP).expect("builtin map is valid")
    }

    pub fn area_index(&self, name: &str) -> Option<usize> {
        self.areas.iter().position(|a| a.name == name)
    }
}

/// The shipped default world, in canonical form.
pub const DEFAULT_MAP: &str = "\
area A1 sees Rock
area A2 sees Rock,Bush
area A3 sees Bush
area A4 sees Boat,Tree
area A5 sees Flower,Bush
area A6 sees Flower,Tree
area A7 sees Boat,Flower
area G sees Flower,Tree
move A1 EN -> A5
move A1 E- -> A2
move A1 -N -> A4
move A2 EN -> A3
move A2 E- -> A3
move A2 -N -> A5
move A2 WN -> A4
move A2 W- -> A1
move A3 EN -> A7
move A3 -N -> A7
move A3 WN -> A5
move A3 W- -> A2
move A4 EN -> A6
move A4 E- -> A5
move A4 ES -> A2
move A4 -N -> A6
move A4 -S -> A1
move A5 EN -> A6
move A5 E- -> A7
move A5 ES -> A3
move A5 -N -> A6
move A5 -S -> A2
move A5 WN -> A6
move A5 W- -> A4
move A5 WS -> A1
move A6 EN -> G
move A6 E- -> G
move A6 ES -> A7
move A6 -S -> A5
move A6 WS -> A4
move A7 EN -> G
move A7 -N -> G
move A7 -S -> A3
move A7 W- -> A5
move A7 WS -> A2
start A2
goal G
";

/// The navigation environment: deterministic in (area, action), stochastic
/// only in the four noise detector bits.
pub struct NavEnv {
    map: NavMap,
    current: usize,
    rng: ChaCha8Rng,
}

impl NavEnv {
    pub fn new(map: NavMap, rng: ChaCha8Rng) -> Self {
        let start = map.start;
        Self { map, current: start, rng }
    }

    pub fn map(&self) -> &NavMap {
        &self.map
    }

    pub fn current_area(&self) -> usize {
        self.current
    }

    /// The observation for an area: map landmarks, water always on, noise
    /// bits drawn fresh.
    fn observe(&mut self, area: usize) -> Observation {
        let mut bits = vec![false; N_DETECTORS];
        for &landmark in &self.map.areas[area].sees {
            bits[landmark] = true;
        }
        bits[DETECTOR_WATER] = true;
        for noise in 0..NOISE_DETECTORS.len() {
            bits[DETECTOR_WATER + 1 + noise] = self.rng.random_bool(0.5);
        }
        Observation::new(bits)
    }

    /// Fixed observation for probing learned values: landmarks and water
    /// only, noise bits off.
    pub fn probe_observation(map: &NavMap, area: usize) -> Observation {
        let mut bits = vec![false; N_DETECTORS];
        for &landmark in &map.areas[area].sees {
            bits[landmark] = true;
        }
        bits[DETECTOR_WATER] = true;
        Observation::new(bits)
    }
}

impl Environment for NavEnv {
    fn descriptor(&self) -> EnvDescriptor {
        EnvDescriptor {
            n_features: N_DETECTORS,
            motor_ranges: MOTOR_RANGES.to_vec(),
            episodic: true,
        }
    }

    fn reset(&mut self) -> Observation {
        self.current = self.map.start;
        self.observe(self.map.start)
    }

    fn step(&mut self, action: &FullAction) -> StepOutcome {
        assert_eq!(action.values.len(), 2, "navigation uses two motors");
        let step = (action.values[0], action.values[1]);
        let next = self.map.areas[self.current]
            .moves
            .get(&step)
            .copied()
            .unwrap_or(self.current);
        self.current = next;
        let terminal = next == self.map.goal;
        StepOutcome {
            observation: self.observe(next),
            reward: if terminal { 100.0 } else { 0.0 },
            terminal,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, STREAM_ENV};

    #[test]
    fn builtin_map_round_trips() {
        let map = NavMap::builtin();
        assert_eq!(map.render(), DEFAULT_MAP);
        let again = NavMap::parse(&map.render()).unwrap();
        assert_eq!(again, map);
    }

    #[test]
    fn builtin_shortest_path_is_three() {
        assert_eq!(NavMap::builtin().shortest_path_length(), Some(3));
    }

    #[test]
    fn map_missing_goal_is_rejected() {
        let text = "area A sees Rock\nstart A\n";
        assert!(matches!(NavMap::parse(text), Err(MapError::Structure(_))));
    }

    #[test]
    fn map_unreachable_goal_is_rejected() {
        let text = "area A sees Rock\narea B\nstart A\ngoal B\n";
        assert!(matches!(NavMap::parse(text), Err(MapError::Structure(_))));
    }

    #[test]
    fn map_parse_errors_carry_line_numbers() {
        let text = "area A sees Rock\nmove A XX -> A\nstart A\ngoal A\n";
        match NavMap::parse(text) {
            Err(MapError::Line { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected line error, got {other:?}"),
        }
    }

    #[test]
    fn reset_shows_start_area_landmarks() {
        let mut env = NavEnv::new(NavMap::builtin(), stream(3, STREAM_ENV));
        let obs = env.reset();
        // A2 sees Rock and Bush; Boat off; Water always on.
        assert!(obs.bits[0]);
        assert!(!obs.bits[1]);
        assert!(obs.bits[4]);
        assert!(obs.bits[DETECTOR_WATER]);
    }

    #[test]
    fn water_always_on_and_noise_near_half() {
        let mut env = NavEnv::new(NavMap::builtin(), stream(4, STREAM_ENV));
        let mut noise_counts = [0usize; 4];
        const N: usize = 10_000;
        for _ in 0..N {
            let obs = env.reset();
            assert!(obs.bits[DETECTOR_WATER]);
            for k in 0..4 {
                noise_counts[k] += obs.bits[DETECTOR_WATER + 1 + k] as usize;
            }
        }
        // 3 sigma for Binomial(10^4, 0.5) is 150.
        for (k, &count) in noise_counts.iter().enumerate() {
            assert!(
                (count as i64 - 5_000).abs() < 150,
                "noise detector {k} frequency {count}/10000 not near half"
            );
        }
    }

    #[test]
    fn steps_follow_the_transition_table() {
        let map = NavMap::builtin();
        let a2 = map.area_index("A2").unwrap();
        let a4 = map.area_index("A4").unwrap();
        let a6 = map.area_index("A6").unwrap();

        let mut env = NavEnv::new(map, stream(5, STREAM_ENV));
        env.reset();
        assert_eq!(env.current_area(), a2);

        // A2 + (W,N) -> A4.
        let out = env.step(&FullAction::new(vec![EW_WEST, NS_NORTH]));
        assert_eq!(env.current_area(), a4);
        assert_eq!(out.reward, 0.0);
        assert!(!out.terminal);

        // A4 + (-,N) -> A6.
        env.step(&FullAction::new(vec![EW_STAY, NS_NORTH]));
        assert_eq!(env.current_area(), a6);

        // A6 + (E,-) -> goal: reward 100, terminal.
        let out = env.step(&FullAction::new(vec![EW_EAST, NS_STAY]));
        assert_eq!(out.reward, 100.0);
        assert!(out.terminal);
    }

    #[test]
    fn unlisted_moves_stay_in_place() {
        let mut env = NavEnv::new(NavMap::builtin(), stream(6, STREAM_ENV));
        env.reset();
        let before = env.current_area();
        let out = env.step(&FullAction::new(vec![EW_STAY, NS_SOUTH]));
        assert_eq!(env.current_area(), before);
        assert_eq!(out.reward, 0.0);
        assert!(!out.terminal);
    }
}

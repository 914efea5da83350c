//! Frame forwarding over an N-node regular linear network.
//!
//! Nodes are numbered `1..=n`. Node `i` transmits in slots `j` with
//! `j ≡ i (mod 2)` and receives in the others. Interior nodes forward the
//! PNC-demodulated XOR of their two neighbors with their own previous
//! transmission removed; the end nodes inject a new source frame in each of
//! their transmit slots and strip the frame they injected last from what they
//! hear back.
//!
//! Every frame in the simulation carries its provenance, the set of source
//! labels `X_l` / `Y_l` XORed into it. A packet whose provenance is empty is
//! the null frame: its holder stays silent and its neighbors fall back to
//! single-sender reception. The all-zeros data frame is not null.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::channel::NoiseStream;
use crate::{Error, Result};

/// Fixed-length bit string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    fn with_len(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyFrame);
        }
        Ok(Self { words: vec![0; len.div_ceil(64)], len })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::with_len(len)
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self> {
        let mut b = Self::with_len(bits.len())?;
        for (i, &bit) in bits.iter().enumerate() {
            b.words[i / 64] |= u64::from(bit) << (i % 64);
        }
        Ok(b)
    }

    pub fn random(len: usize, noise: &mut NoiseStream) -> Result<Self> {
        let mut b = Self::with_len(len)?;
        for w in &mut b.words {
            *w = noise.next_u64();
        }
        if len % 64 != 0 {
            let last = b.words.len() - 1;
            b.words[last] &= (1u64 << (len % 64)) - 1;
        }
        Ok(b)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        (i < self.len).then(|| self.words[i / 64] >> (i % 64) & 1 == 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.words[i / 64] >> (i % 64) & 1 == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn xor(&self, other: &Bits) -> Result<Bits> {
        if self.len != other.len {
            return Err(Error::FrameLength(self.len, other.len));
        }
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect();
        Ok(Bits { words, len: self.len })
    }
}

/// A frame on the air: either the null (silence) frame or data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Frame {
    Null,
    Data(Bits),
}

impl Frame {
    pub fn from_bools(bits: &[bool]) -> Result<Self> {
        Bits::from_bools(bits).map(Frame::Data)
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Bits::zeros(len).map(Frame::Data)
    }

    pub fn random(len: usize, noise: &mut NoiseStream) -> Result<Self> {
        Bits::random(len, noise).map(Frame::Data)
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Frame::Null)
    }

    pub fn bit_len(&self) -> Option<usize> {
        match self {
            Frame::Null => None,
            Frame::Data(b) => Some(b.len()),
        }
    }
}

/// Bitwise XOR with the null frame as identity. Each data frame is its own
/// inverse; `X ⊕ X` is the all-zeros frame.
pub fn frame_xor(a: &Frame, b: &Frame) -> Result<Frame> {
    match (a, b) {
        (Frame::Null, f) | (f, Frame::Null) => Ok(f.clone()),
        (Frame::Data(x), Frame::Data(y)) => x.xor(y).map(Frame::Data),
    }
}

/// Source frame label: `X_l` originates at node 1, `Y_l` at node n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    X(u64),
    Y(u64),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::X(l) => write!(f, "X{l}"),
            Label::Y(l) => write!(f, "Y{l}"),
        }
    }
}

/// Set of source labels combined under XOR.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Provenance(BTreeSet<Label>);

impl Provenance {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn of(labels: impl IntoIterator<Item = Label>) -> Self {
        let mut p = Self::empty();
        for l in labels {
            p.toggle(l);
        }
        p
    }

    pub fn toggle(&mut self, label: Label) {
        if !self.0.remove(&label) {
            self.0.insert(label);
        }
    }

    pub fn xor(&self, other: &Provenance) -> Provenance {
        Provenance(self.0.symmetric_difference(&other.0).copied().collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("NULL");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Frame payload together with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packet {
    pub frame: Frame,
    pub tags: Provenance,
}

impl Packet {
    pub fn null() -> Self {
        Self { frame: Frame::Null, tags: Provenance::empty() }
    }

    /// A source frame; a null frame yields the null packet.
    pub fn source(label: Label, frame: Frame) -> Self {
        if frame.is_null() {
            Self::null()
        } else {
            Self { frame, tags: Provenance::of([label]) }
        }
    }

    pub fn is_null(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn xor(&self, other: &Packet) -> Result<Packet> {
        let tags = self.tags.xor(&other.tags);
        if tags.is_empty() {
            // every label cancelled: what is left is silence, not data
            return Ok(Packet::null());
        }
        Ok(Packet { frame: frame_xor(&self.frame, &other.frame)?, tags })
    }
}

impl fmt::Display for Packet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.tags.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Only node 1 has traffic; node n echoes what it decodes.
    Unidirectional,
    Bidirectional,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Unidirectional => "unidirectional",
            Mode::Bidirectional => "bidirectional",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unidirectional" | "uni" => Ok(Mode::Unidirectional),
            "bidirectional" | "bi" => Ok(Mode::Bidirectional),
            other => Err(Error::UnknownScheme(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Tx,
    Rx,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Tx => "tx",
            Role::Rx => "rx",
        })
    }
}

/// Node `i` transmits in slot `j` iff `j ≡ i (mod 2)`.
pub fn role(node: usize, slot: u64) -> Role {
    if (slot % 2) as usize == node % 2 {
        Role::Tx
    } else {
        Role::Rx
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeState {
    pub index: usize,
    pub buffer: Packet,
}

impl NodeState {
    pub fn is_odd(&self) -> bool {
        self.index % 2 == 1
    }
}

/// One `(slot, node)` entry of the trace. `frame` is what the node sent when
/// transmitting or what it received when listening; `buffer` is its buffer at
/// the end of the slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRecord {
    pub slot: u64,
    pub node: usize,
    pub role: Role,
    pub frame: Packet,
    pub buffer: Packet,
}

/// A non-null source frame recovered at an end node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Delivery {
    pub slot: u64,
    pub label: Label,
}

#[derive(Debug, Clone)]
pub struct ChainSim {
    n: usize,
    mode: Mode,
    x: Vec<Frame>,
    y: Vec<Frame>,
    nodes: Vec<NodeState>,
    last_x: Packet,
    last_y: Packet,
    injected_x: u64,
    injected_y: u64,
    slot: u64,
    trace: Vec<NodeRecord>,
    deliveries: Vec<Delivery>,
}

fn check_lengths(frames: &[Frame], bits: &mut Option<usize>) -> Result<()> {
    for len in frames.iter().filter_map(Frame::bit_len) {
        match *bits {
            None => *bits = Some(len),
            Some(b) if b != len => return Err(Error::FrameLength(b, len)),
            Some(_) => {}
        }
    }
    Ok(())
}

impl ChainSim {
    /// `x_frames[l-1]` is `X_l`; frames past the end of either list are null.
    pub fn new(n: usize, mode: Mode, x_frames: Vec<Frame>, y_frames: Vec<Frame>) -> Result<Self> {
        if n < 3 {
            return Err(Error::ChainTooShort(n));
        }
        if mode == Mode::Unidirectional {
            if let Some(k) = y_frames.iter().position(|f| !f.is_null()) {
                return Err(Error::ReverseTraffic(k + 1));
            }
        }
        let mut bits = None;
        check_lengths(&x_frames, &mut bits)?;
        check_lengths(&y_frames, &mut bits)?;
        Ok(Self {
            n,
            mode,
            x: x_frames,
            y: y_frames,
            nodes: (1..=n).map(|index| NodeState { index, buffer: Packet::null() }).collect(),
            last_x: Packet::null(),
            last_y: Packet::null(),
            injected_x: 0,
            injected_y: 0,
            slot: 0,
            trace: Vec::new(),
            deliveries: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Last completed slot; 0 before the first step.
    pub fn slot(&self) -> u64 {
        self.slot
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn trace(&self) -> &[NodeRecord] {
        &self.trace
    }

    pub fn deliveries(&self) -> &[Delivery] {
        &self.deliveries
    }

    fn source(&self, label: Label) -> Packet {
        let (frames, l) = match label {
            Label::X(l) => (&self.x, l),
            Label::Y(l) => (&self.y, l),
        };
        let frame = (l as usize).checked_sub(1).and_then(|k| frames.get(k)).cloned().unwrap_or(Frame::Null);
        Packet::source(label, frame)
    }

    /// What an end node must hold after listening in `slot`: the source frame
    /// of the opposite end with index `k`, null when `k < 1`.
    fn expected(&self, node: usize, slot: u64) -> Packet {
        let k = (slot as i64 - self.n as i64 + 3).div_euclid(2);
        if k < 1 {
            return Packet::null();
        }
        if node == 1 {
            self.source(Label::Y(k as u64))
        } else {
            self.source(Label::X(k as u64))
        }
    }

    /// Advances one slot. Fails if an end node does not recover the expected
    /// frame.
    pub fn step_slot(&mut self) -> Result<()> {
        let j = self.slot + 1;
        let n = self.n;

        // transmitters first: end nodes mix in their next source frame
        let mut sent = vec![Packet::null(); n];
        for i in 1..=n {
            if role(i, j) != Role::Tx {
                continue;
            }
            if i == 1 {
                self.injected_x += 1;
                self.last_x = self.source(Label::X(self.injected_x));
                self.nodes[0].buffer = self.last_x.xor(&self.nodes[0].buffer)?;
            } else if i == n {
                self.injected_y += 1;
                self.last_y = self.source(Label::Y(self.injected_y));
                self.nodes[n - 1].buffer = self.last_y.xor(&self.nodes[n - 1].buffer)?;
            }
            sent[i - 1] = self.nodes[i - 1].buffer.clone();
        }

        let silent = Packet::null();
        let mut heard = vec![Packet::null(); n];
        for i in 1..=n {
            if role(i, j) != Role::Rx {
                continue;
            }
            let left = if i > 1 { &sent[i - 2] } else { &silent };
            let right = if i < n { &sent[i] } else { &silent };
            let r = left.xor(right)?;
            let strip = if i == 1 {
                &self.last_x
            } else if i == n {
                &self.last_y
            } else {
                &self.nodes[i - 1].buffer
            };
            self.nodes[i - 1].buffer = strip.xor(&r)?;
            heard[i - 1] = r;
        }

        for i in 1..=n {
            let r = role(i, j);
            let frame = match r {
                Role::Tx => sent[i - 1].clone(),
                Role::Rx => heard[i - 1].clone(),
            };
            self.trace.push(NodeRecord { slot: j, node: i, role: r, frame, buffer: self.nodes[i - 1].buffer.clone() });
        }
        self.slot = j;

        for end in [1, n] {
            if role(end, j) != Role::Rx {
                continue;
            }
            let want = self.expected(end, j);
            let got = &self.nodes[end - 1].buffer;
            if *got != want {
                return Err(Error::Protocol { slot: j, node: end, detail: format!("decoded {got}, expected {want}") });
            }
            let label = want.tags.labels().next();
            if let Some(label) = label {
                self.deliveries.push(Delivery { slot: j, label });
            }
        }
        Ok(())
    }
}

/// Delivered frames per slot, counted after the warmup window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Throughput {
    pub warmup_slots: u64,
    pub window_slots: u64,
    /// Frames from node 1 recovered at node n.
    pub forward_frames: u64,
    /// Frames from node n recovered at node 1.
    pub reverse_frames: u64,
    pub forward_rate: f64,
    pub reverse_rate: f64,
}

#[derive(Debug, Clone)]
pub struct ChainRun {
    pub n: usize,
    pub mode: Mode,
    pub total_slots: u64,
    pub trace: Vec<NodeRecord>,
    pub deliveries: Vec<Delivery>,
    pub throughput: Throughput,
}

pub fn warmup_slots(n: usize) -> u64 {
    2 * n as u64
}

pub fn run_chain(
    n: usize,
    mode: Mode,
    x_frames: Vec<Frame>,
    y_frames: Vec<Frame>,
    total_slots: u64,
) -> Result<ChainRun> {
    let mut sim = ChainSim::new(n, mode, x_frames, y_frames)?;
    let min = 4 * n as u64;
    if total_slots < min {
        return Err(Error::TooFewSlots { min, got: total_slots });
    }
    for _ in 0..total_slots {
        sim.step_slot()?;
    }
    let warmup = warmup_slots(n);
    let window = total_slots - warmup;
    let count = |x: bool| {
        sim.deliveries.iter().filter(|d| d.slot > warmup && matches!(d.label, Label::X(_)) == x).count() as u64
    };
    let (fwd, rev) = (count(true), count(false));
    Ok(ChainRun {
        n,
        mode,
        total_slots,
        throughput: Throughput {
            warmup_slots: warmup,
            window_slots: window,
            forward_frames: fwd,
            reverse_frames: rev,
            forward_rate: fwd as f64 / window as f64,
            reverse_rate: rev as f64 / window as f64,
        },
        trace: sim.trace,
        deliveries: sim.deliveries,
    })
}

/// Highest sustainable rate of either end, in frames per slot.
pub const MAX_RATE: f64 = 0.5;

/// Which of an end node's first `count` transmit opportunities carry data
/// when it offers `rate` frames per slot. Data frames are spread evenly
/// (Bresenham), the rest are null.
pub fn rate_pattern(count: usize, rate: f64) -> Result<Vec<bool>> {
    if !(0.0..=MAX_RATE).contains(&rate) {
        return Err(Error::InvalidRate(rate));
    }
    let f = rate / MAX_RATE;
    let level = |l: usize| (l as f64 * f + 1e-9).floor();
    Ok((1..=count).map(|l| level(l) > level(l - 1)).collect())
}

/// `count` source frames of `frame_bits` random bits at the given rate.
pub fn source_frames(count: usize, rate: f64, frame_bits: usize, noise: &mut NoiseStream) -> Result<Vec<Frame>> {
    rate_pattern(count, rate)?
        .into_iter()
        .map(|on| if on { Frame::random(frame_bits, noise) } else { Ok(Frame::Null) })
        .collect()
}

/// Number of transmit opportunities an end node gets in `total_slots`.
pub fn frames_for_slots(total_slots: u64) -> usize {
    total_slots.div_ceil(2) as usize
}

/// Reference relaying schemes for the three-node exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExchangeScheme {
    Traditional,
    StraightforwardNc,
    Pnc,
}

impl ExchangeScheme {
    pub const ALL: [ExchangeScheme; 3] =
        [ExchangeScheme::Traditional, ExchangeScheme::StraightforwardNc, ExchangeScheme::Pnc];

    pub fn name(self) -> &'static str {
        match self {
            ExchangeScheme::Traditional => "traditional",
            ExchangeScheme::StraightforwardNc => "snc",
            ExchangeScheme::Pnc => "pnc",
        }
    }
}

/// Outcome of one two-way exchange between nodes 1 and 3 via relay 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exchange {
    pub slots: u32,
    pub at_node1: Frame,
    pub at_node3: Frame,
}

/// Runs one exchange of `x` (from node 1) and `y` (from node 3) slot by slot.
pub fn three_node_exchange(scheme: ExchangeScheme, x: &Frame, y: &Frame) -> Result<Exchange> {
    let mut slots = 0;
    let mut slot = || slots += 1;
    let (at1, at3) = match scheme {
        ExchangeScheme::Traditional => {
            slot();
            let relay = x.clone();
            slot();
            let at3 = relay;
            slot();
            let relay = y.clone();
            slot();
            (relay, at3)
        }
        ExchangeScheme::StraightforwardNc => {
            slot();
            let rx = x.clone();
            slot();
            let ry = y.clone();
            slot();
            let bcast = frame_xor(&rx, &ry)?;
            (frame_xor(&bcast, x)?, frame_xor(&bcast, y)?)
        }
        ExchangeScheme::Pnc => {
            slot();
            let mixed = frame_xor(x, y)?;
            slot();
            (frame_xor(&mixed, x)?, frame_xor(&mixed, y)?)
        }
    };
    Ok(Exchange { slots, at_node1: at1, at_node3: at3 })
}

/// Synchronization budget of an N-node chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncBudget {
    pub n_nodes: usize,
    /// Time to synchronize one basic group, in seconds.
    pub dt_bg: f64,
    /// Resynchronization period, in seconds.
    pub t_p: f64,
}

impl SyncBudget {
    /// Number of basic groups, `⌊(N-1)/2⌋`.
    pub fn groups(&self) -> usize {
        (self.n_nodes - 1) / 2
    }

    /// Total synchronization time `Ts = (N-2) Δt_BG`.
    pub fn sync_time(&self) -> f64 {
        (self.n_nodes as f64 - 2.0) * self.dt_bg
    }
}

/// Fraction of airtime spent on synchronization, `Ts / Tp`.
pub fn sync_overhead(budget: &SyncBudget) -> Result<f64> {
    if budget.n_nodes < 3 {
        return Err(Error::ChainTooShort(budget.n_nodes));
    }
    if !(budget.dt_bg >= 0.0 && budget.dt_bg.is_finite()) {
        return Err(Error::OutsideModel { name: "dt_bg", value: budget.dt_bg, range: "[0, inf)" });
    }
    if !(budget.t_p > 0.0 && budget.t_p.is_finite()) {
        return Err(Error::OutsideModel { name: "t_p", value: budget.t_p, range: "(0, inf)" });
    }
    let ts = budget.sync_time();
    if ts > budget.t_p {
        return Err(Error::InfeasibleSyncBudget { ts, tp: budget.t_p });
    }
    Ok(ts / budget.t_p)
}

//! Digital symbol sets, network-coding arithmetic and PNC mappings.
//!
//! A PNC scheme is a network code `(M, ⊕)`, a one-to-one modulation map
//! `f: M -> E` and a many-to-one demodulation map `h: E' -> M` acting on the
//! superposition of two modulated symbols. Superposition is real addition of
//! amplitudes (synchronous arrival at equal power). QPSK is handled as two
//! independent BPSK streams, so every amplitude here is real.

use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

/// Alphabet `{0, 1, ..., L-1}` of digital symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymbolSet {
    size: usize,
}

impl SymbolSet {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidAlphabet(size));
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn check(&self, symbol: usize) -> Result<usize> {
        if symbol < self.size {
            Ok(symbol)
        } else {
            Err(Error::SymbolOutOfRange { symbol, size: self.size })
        }
    }

    pub fn iter(&self) -> std::ops::Range<usize> {
        0..self.size
    }
}

/// In-phase and quadrature bits of one QPSK symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct QpskStreamPair {
    pub in_phase_bit: bool,
    pub quadrature_bit: bool,
}

impl QpskStreamPair {
    pub fn new(in_phase_bit: bool, quadrature_bit: bool) -> Self {
        Self { in_phase_bit, quadrature_bit }
    }

    /// `(a, b)` amplitudes on the cosine and sine carriers.
    pub fn modulate(&self) -> (f64, f64) {
        (bpsk_modulate(self.in_phase_bit), bpsk_modulate(self.quadrature_bit))
    }

    /// Relay output for two simultaneously received QPSK symbols: each rail
    /// is demapped on its own.
    pub fn pnc_relay(i_sum: f64, q_sum: f64) -> Result<Self> {
        Ok(Self { in_phase_bit: pnc_demap_bpsk_sum(i_sum)? == 1, quadrature_bit: pnc_demap_bpsk_sum(q_sum)? == 1 })
    }
}

impl std::ops::BitXor for QpskStreamPair {
    type Output = Self;

    fn bitxor(self, rhs: Self) -> Self {
        Self {
            in_phase_bit: self.in_phase_bit ^ rhs.in_phase_bit,
            quadrature_bit: self.quadrature_bit ^ rhs.quadrature_bit,
        }
    }
}

/// BPSK amplitude `2s - 1`.
pub fn bpsk_modulate(bit: bool) -> f64 {
    if bit {
        1.0
    } else {
        -1.0
    }
}

/// Maps a noiseless BPSK superposition `a1 + a3` to the XOR bit.
pub fn pnc_demap_bpsk_sum(sum: f64) -> Result<u8> {
    if sum == 0.0 {
        Ok(1)
    } else if sum == 2.0 || sum == -2.0 {
        Ok(0)
    } else {
        Err(Error::InvalidSuperposition(sum))
    }
}

/// L-PAM amplitude `2m - (L - 1)`.
pub fn pam_modulate(m: usize, levels: usize) -> Result<f64> {
    let set = SymbolSet::new(levels)?;
    set.check(m)?;
    Ok(2.0 * m as f64 - (levels as f64 - 1.0))
}

/// Network-coding addition `(m_i + m_j) mod L`.
pub fn pam_code_add(m_i: usize, m_j: usize, levels: usize) -> Result<usize> {
    let set = SymbolSet::new(levels)?;
    set.check(m_i)?;
    set.check(m_j)?;
    Ok((m_i + m_j) % levels)
}

/// Closed-form L-PAM demodulation `h(e') = (e'/2 - 1) mod L`.
pub fn pam_pnc_demap(e_sum: f64, levels: usize) -> Result<usize> {
    SymbolSet::new(levels)?;
    let max = 2.0 * (levels as f64 - 1.0);
    if !e_sum.is_finite() || e_sum.fract() != 0.0 || e_sum.abs() > max {
        return Err(Error::InvalidSuperposition(e_sum));
    }
    let e = e_sum as i64;
    if e % 2 != 0 {
        return Err(Error::InvalidSuperposition(e_sum));
    }
    Ok((e / 2 - 1).rem_euclid(levels as i64) as usize)
}

/// Demodulation table `h: E' -> M`, sorted by superposed amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct DemodTable {
    entries: Vec<DemodEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemodEntry {
    pub superposition: f64,
    pub symbol: usize,
    /// Decomposition `(m_i, m_j)` used to define the entry.
    pub representative: (usize, usize),
}

impl DemodTable {
    pub fn entries(&self) -> &[DemodEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, superposition: f64) -> Option<usize> {
        let key = canonical(superposition);
        self.entries.binary_search_by(|e| e.superposition.total_cmp(&key)).ok().map(|i| self.entries[i].symbol)
    }
}

/// Two symbol pairs whose superpositions coincide but whose network-coded
/// values differ. No demodulation map can serve both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub superposition: f64,
    pub first_code: usize,
    pub second_code: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pairs {:?} and {:?} both superpose to {} but code to {} and {}",
            self.first, self.second, self.superposition, self.first_code, self.second_code
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MappingCheck {
    Valid(DemodTable),
    Violation(Violation),
}

/// A network code, a modulation map and (once verified) a demodulation map.
#[derive(Debug, Clone, PartialEq)]
pub struct PncScheme {
    symbols: SymbolSet,
    code_table: Vec<usize>,
    mod_map: Vec<f64>,
    demod_map: Option<DemodTable>,
}

impl PncScheme {
    /// Builds a scheme from an amplitude per symbol and a network-coding
    /// operation. The operation is tabulated eagerly and must stay inside the
    /// alphabet.
    pub fn new(symbols: SymbolSet, mod_map: Vec<f64>, code_add: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let l = symbols.size();
        if mod_map.len() != l {
            return Err(Error::ModulationSize { expected: l, got: mod_map.len() });
        }
        let mut code_table = Vec::with_capacity(l * l);
        for i in symbols.iter() {
            for j in symbols.iter() {
                code_table.push(symbols.check(code_add(i, j))?);
            }
        }
        Ok(Self { symbols, code_table, mod_map, demod_map: None })
    }

    /// BPSK with XOR: the in-phase rail of QPSK PNC.
    pub fn bpsk_xor() -> Self {
        Self::new(SymbolSet { size: 2 }, vec![-1.0, 1.0], |a, b| a ^ b).expect("static scheme")
    }

    /// L-PAM with `f(m) = 2m - (L-1)` and `⊕` = addition mod L.
    pub fn pam(levels: usize) -> Result<Self> {
        let symbols = SymbolSet::new(levels)?;
        let f = symbols.iter().map(|m| 2.0 * m as f64 - (levels as f64 - 1.0)).collect();
        Self::new(symbols, f, |a, b| (a + b) % levels)
    }

    /// L-PAM amplitudes with bitwise XOR as the network code (L a power of 2).
    pub fn pam_bitwise_xor(levels: usize) -> Result<Self> {
        let symbols = SymbolSet::new(levels)?;
        let f = symbols.iter().map(|m| 2.0 * m as f64 - (levels as f64 - 1.0)).collect();
        Self::new(symbols, f, |a, b| a ^ b)
    }

    pub fn symbols(&self) -> SymbolSet {
        self.symbols
    }

    pub fn modulate(&self, m: usize) -> Result<f64> {
        Ok(self.mod_map[self.symbols.check(m)?])
    }

    pub fn code_add(&self, m_i: usize, m_j: usize) -> Result<usize> {
        let l = self.symbols.size();
        Ok(self.code_table[self.symbols.check(m_i)? * l + self.symbols.check(m_j)?])
    }

    pub fn demod_map(&self) -> Option<&DemodTable> {
        self.demod_map.as_ref()
    }

    /// `h(e')`, available after [`PncScheme::verified`].
    pub fn demodulate(&self, superposition: f64) -> Option<usize> {
        self.demod_map.as_ref()?.lookup(superposition)
    }

    /// Runs [`verify_mapping`] and attaches the demodulation map.
    pub fn verified(mut self) -> Result<Self> {
        match verify_mapping(&self)? {
            MappingCheck::Valid(table) => {
                self.demod_map = Some(table);
                Ok(self)
            }
            MappingCheck::Violation(v) => Err(Error::MappingViolation(v.to_string())),
        }
    }
}

/// Decides whether a demodulation map exists for `scheme` and builds it.
///
/// Every ordered pair `(m_i, m_j)` is enumerated. If two pairs superpose to
/// the same amplitude but code to different symbols, the lexicographically
/// smallest such pair-of-pairs is returned. Otherwise each superposition is
/// mapped to the code value of its first decomposition (ascending `m_i`).
pub fn verify_mapping(scheme: &PncScheme) -> Result<MappingCheck> {
    let l = scheme.symbols.size();
    for a in 0..l {
        for b in a + 1..l {
            if scheme.mod_map[a] == scheme.mod_map[b] {
                return Err(Error::NonInjectiveModulation(a, b, scheme.mod_map[a]));
            }
        }
    }

    let pairs: Vec<((usize, usize), f64, usize)> = (0..l)
        .flat_map(|i| (0..l).map(move |j| (i, j)))
        .map(|(i, j)| {
            let e = canonical(scheme.mod_map[i] + scheme.mod_map[j]);
            ((i, j), e, scheme.code_table[i * l + j])
        })
        .collect();

    for (k, &(first, e1, c1)) in pairs.iter().enumerate() {
        if let Some(&(second, _, c2)) = pairs[k + 1..].iter().find(|&&(_, e2, c2)| e2 == e1 && c2 != c1) {
            return Ok(MappingCheck::Violation(Violation {
                first,
                second,
                superposition: e1,
                first_code: c1,
                second_code: c2,
            }));
        }
    }

    let mut entries: Vec<DemodEntry> = Vec::new();
    for &(pair, e, code) in &pairs {
        if !entries.iter().any(|d| d.superposition == e) {
            entries.push(DemodEntry { superposition: e, symbol: code, representative: pair });
        }
    }
    entries.sort_by(|x, y| x.superposition.partial_cmp(&y.superposition).unwrap_or(Ordering::Equal));
    Ok(MappingCheck::Valid(DemodTable { entries }))
}

fn canonical(x: f64) -> f64 {
    // -0.0 and 0.0 are the same superposition
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

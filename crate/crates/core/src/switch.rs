//! Switch domain types: crossbar matchings, frame schedules, per-VOQ
//! backlog, and the slot transition shared by every scheduler and by the
//! simulator.
//!
//! Traffic is frame-synchronized: every VOQ receives one packet at the
//! start of each frame of `t` slots and the packet expires at frame end.
//! Slots are 1-indexed globally; frame `f` spans slots `f*t+1 ..= (f+1)*t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{validate_binary, BinMatrix, SquareMatrix};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchConfig {
    /// Switch size: number of inputs = number of outputs.
    pub n: usize,
    /// Frame length in slots; also every packet's deadline.
    pub t: usize,
}

impl SwitchConfig {
    pub fn new(n: usize, t: usize) -> Result<Self> {
        if n == 0 || t == 0 {
            return Err(Error::BadConfig { n, t });
        }
        Ok(SwitchConfig { n, t })
    }

    /// 1-based slot position within its frame.
    pub fn slot_in_frame(&self, slot: u64) -> usize {
        ((slot - 1) % self.t as u64) as usize + 1
    }

    pub fn is_frame_end(&self, slot: u64) -> bool {
        slot % self.t as u64 == 0
    }
}

/// True iff every row and column of the 0/1 matrix sums to at most 1.
///
/// Errors if the matrix has entries outside {0, 1}.
pub fn is_matching(m: &BinMatrix) -> Result<bool> {
    validate_binary(m)?;
    let n = m.n();
    for k in 0..n {
        if m.row_sum(k) > 1 || m.col_sum(k) > 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One slot's crossbar configuration: a subpermutation matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    entries: BinMatrix,
}

impl Matching {
    pub fn new(entries: BinMatrix) -> Result<Self> {
        if is_matching(&entries)? {
            Ok(Matching { entries })
        } else {
            Err(Error::NotAMatching)
        }
    }

    pub fn empty(n: usize) -> Self {
        Matching {
            entries: BinMatrix::filled(n, 0),
        }
    }

    pub fn identity(n: usize) -> Self {
        Matching {
            entries: BinMatrix::from_fn(n, |i, j| u8::from(i == j)),
        }
    }

    /// Perfect matching from a permutation: input `i` connects to output
    /// `perm[i]` (0-based).
    pub fn from_permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let entries = BinMatrix::from_fn(n, |i, j| u8::from(perm[i] == j));
        Matching::new(entries)
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut entries = BinMatrix::filled(n, 0);
        for &(i, j) in pairs {
            entries[(i, j)] = 1;
        }
        Matching::new(entries)
    }

    pub fn n(&self) -> usize {
        self.entries.n()
    }

    pub fn covers(&self, i: usize, j: usize) -> bool {
        self.entries[(i, j)] == 1
    }

    pub fn entries(&self) -> &BinMatrix {
        &self.entries
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries
            .iter_indexed()
            .filter(|(_, _, &v)| v == 1)
            .map(|(i, j, _)| (i, j))
    }

    /// Number of selected edges.
    pub fn size(&self) -> usize {
        self.pairs().count()
    }
}

/// True iff no position is selected by more than one of the `t` matchings.
///
/// Errors if the slice does not hold exactly `t` matchings.
pub fn is_t_disjoint(matchings: &[Matching], t: usize) -> Result<bool> {
    if matchings.len() != t {
        return Err(Error::WrongScheduleLength {
            expected: t,
            got: matchings.len(),
        });
    }
    Ok(disjoint_union(matchings).is_ok())
}

fn disjoint_union(matchings: &[Matching]) -> Result<BinMatrix> {
    let n = matchings.first().map(Matching::n).unwrap_or(0);
    let mut union = BinMatrix::filled(n.max(1), 0);
    for m in matchings {
        if m.n() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: m.n(),
            });
        }
        for (i, j) in m.pairs() {
            if union[(i, j)] == 1 {
                return Err(Error::NotDisjoint { i, j });
            }
            union[(i, j)] = 1;
        }
    }
    Ok(union)
}

/// An ordered list of exactly `t` pairwise-disjoint matchings: one frame's
/// schedule. All-zero matchings are permitted padding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameSchedule {
    matchings: Vec<Matching>,
}

impl FrameSchedule {
    pub fn new(matchings: Vec<Matching>, t: usize) -> Result<Self> {
        if matchings.len() != t {
            return Err(Error::WrongScheduleLength {
                expected: t,
                got: matchings.len(),
            });
        }
        disjoint_union(&matchings)?;
        Ok(FrameSchedule { matchings })
    }

    pub fn t(&self) -> usize {
        self.matchings.len()
    }

    pub fn matchings(&self) -> &[Matching] {
        &self.matchings
    }

    /// Matching played at the (1-based) slot within the frame.
    pub fn slot(&self, slot_in_frame: usize) -> &Matching {
        &self.matchings[slot_in_frame - 1]
    }

    /// Entrywise sum of all matchings; binary by disjointness.
    pub fn union(&self) -> BinMatrix {
        disjoint_union(&self.matchings).expect("schedule invariant")
    }

    /// Total weight of the covered positions.
    pub fn covered_weight<W>(&self, weights: &SquareMatrix<W>) -> W
    where
        W: num_traits::Zero + Clone + std::ops::Add<Output = W>,
    {
        crate::matrix::masked_sum(weights, &self.union())
    }
}

/// Presence of an undelivered, unexpired packet per VOQ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoqBacklog {
    present: BinMatrix,
}

impl VoqBacklog {
    /// Frame-start backlog: one fresh packet in every VOQ.
    pub fn all_ones(n: usize) -> Self {
        VoqBacklog {
            present: BinMatrix::filled(n, 1),
        }
    }

    pub fn new(present: BinMatrix) -> Result<Self> {
        validate_binary(&present)?;
        Ok(VoqBacklog { present })
    }

    pub fn n(&self) -> usize {
        self.present.n()
    }

    pub fn has_packet(&self, i: usize, j: usize) -> bool {
        self.present[(i, j)] == 1
    }

    pub fn entries(&self) -> &BinMatrix {
        &self.present
    }
}

/// Deliveries performed in one slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeliveryRecord {
    pub slot: u64,
    pub deliveries: Matching,
}

/// Applies one slot of switch dynamics.
///
/// A packet is delivered at (i,j) iff the action selects (i,j) and a packet
/// is present; scheduling an empty VOQ is legal and delivers nothing. At the
/// last slot of a frame the returned backlog is all-ones (expiry of
/// leftovers fused with the synchronized arrivals); otherwise only delivered
/// entries flip to 0.
pub fn advance_slot(
    backlog: &VoqBacklog,
    action: &Matching,
    slot: u64,
    config: &SwitchConfig,
) -> Result<(VoqBacklog, DeliveryRecord)> {
    if slot == 0 {
        return Err(Error::BadSlotIndex);
    }
    let n = config.n;
    if backlog.n() != n || action.n() != n {
        return Err(Error::DimensionMismatch {
            left: backlog.n(),
            right: action.n(),
        });
    }
    let delivered = BinMatrix::from_fn(n, |i, j| {
        u8::from(action.covers(i, j) && backlog.has_packet(i, j))
    });
    let next = if config.is_frame_end(slot) {
        VoqBacklog::all_ones(n)
    } else {
        VoqBacklog {
            present: BinMatrix::from_fn(n, |i, j| backlog.entries()[(i, j)] & !delivered[(i, j)]),
        }
    };
    let record = DeliveryRecord {
        slot,
        deliveries: Matching::new(delivered).expect("subset of a matching"),
    };
    Ok((next, record))
}

/// Target or achieved timely throughput per VOQ, packets per slot.
/// Entries are exact rationals so queue arithmetic stays exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateMatrix {
    entries: SquareMatrix<Rational>,
}

impl RateMatrix {
    pub fn new(entries: SquareMatrix<Rational>) -> Result<Self> {
        for (i, j, v) in entries.iter_indexed() {
            if v < &Rational::from_integer(0) {
                return Err(Error::NegativeEntry { i, j });
            }
        }
        Ok(RateMatrix { entries })
    }

    pub fn zeros(n: usize) -> Self {
        RateMatrix {
            entries: SquareMatrix::filled(n, Rational::from_integer(0)),
        }
    }

    pub fn uniform(n: usize, rate: Rational) -> Result<Self> {
        RateMatrix::new(SquareMatrix::filled(n, rate))
    }

    pub fn n(&self) -> usize {
        self.entries.n()
    }

    pub fn entries(&self) -> &SquareMatrix<Rational> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.entries[(i, j)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::binary_from_rows;

    #[test]
    fn matching_checks() {
        let id = binary_from_rows(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(is_matching(&id).unwrap());
        let zero = BinMatrix::filled(3, 0);
        assert!(is_matching(&zero).unwrap());
        // Two packets out of the same input violate the row constraint.
        let bad = binary_from_rows(vec![vec![1, 1, 0], vec![0, 0, 0], vec![0, 0, 0]]).unwrap();
        assert!(!is_matching(&bad).unwrap());
    }

    #[test]
    fn non_binary_is_an_error() {
        let mut m = BinMatrix::filled(2, 0);
        m[(0, 0)] = 2;
        assert!(is_matching(&m).is_err());
    }

    #[test]
    fn disjointness() {
        let id = Matching::identity(2);
        let zero = Matching::empty(2);
        assert!(is_t_disjoint(&[id.clone(), zero], 2).unwrap());
        assert!(!is_t_disjoint(&[id.clone(), id.clone()], 2).unwrap());
        assert!(is_t_disjoint(&[id], 2).is_err());
    }

    #[test]
    fn advance_delivers_then_resets() {
        let config = SwitchConfig::new(3, 2).unwrap();
        let start = VoqBacklog::all_ones(3);
        let (after, rec) = advance_slot(&start, &Matching::identity(3), 1, &config).unwrap();
        assert_eq!(rec.deliveries, Matching::identity(3));
        for k in 0..3 {
            assert!(!after.has_packet(k, k));
        }
        // Slot 2 ends the frame: fresh packets everywhere afterwards.
        let (reset, _) = advance_slot(&after, &Matching::empty(3), 2, &config).unwrap();
        assert_eq!(reset, VoqBacklog::all_ones(3));
    }

    #[test]
    fn scheduling_an_empty_voq_delivers_nothing() {
        let config = SwitchConfig::new(2, 3).unwrap();
        let mut entries = BinMatrix::filled(2, 1);
        entries[(0, 0)] = 0;
        let backlog = VoqBacklog::new(entries).unwrap();
        let (_, rec) = advance_slot(&backlog, &Matching::identity(2), 1, &config).unwrap();
        assert!(!rec.deliveries.covers(0, 0));
        assert!(rec.deliveries.covers(1, 1));
    }

    #[test]
    fn one_delivery_per_voq_per_frame() {
        // Greedily schedule the same VOQ twice in a frame: the second
        // selection finds the VOQ empty.
        let config = SwitchConfig::new(2, 2).unwrap();
        let m = Matching::from_pairs(2, &[(0, 0)]).unwrap();
        let (after, r1) = advance_slot(&VoqBacklog::all_ones(2), &m, 1, &config).unwrap();
        let (_, r2) = advance_slot(&after, &m, 2, &config).unwrap();
        assert!(r1.deliveries.covers(0, 0));
        assert!(!r2.deliveries.covers(0, 0));
    }
}

use pnc::chain::{
    frames_for_slots, role, run_chain, source_frames, three_node_exchange, ChainRun, ExchangeScheme, Frame, Label,
    Mode, Provenance, Role, MAX_RATE,
};
use pnc::channel::NoiseStream;

fn frames(count: usize, rate: f64, stream: u64) -> Vec<Frame> {
    source_frames(count, rate, 24, &mut NoiseStream::new(77, stream)).unwrap()
}

fn dense_run(n: usize, mode: Mode, total: u64) -> (ChainRun, Vec<Frame>, Vec<Frame>) {
    let count = frames_for_slots(total);
    let x = frames(count, MAX_RATE, 0);
    let y = if mode == Mode::Bidirectional { frames(count, MAX_RATE, 1) } else { vec![] };
    (run_chain(n, mode, x.clone(), y.clone(), total).unwrap(), x, y)
}

/// Labels node `i` sends in slot `j`, from the closed-form schedule
/// `X_{(j-i+2)/2} ⊕ Y_{(j+i-m+1)/2}` with `m` the smallest odd number ≥ n.
fn scheduled(n: usize, i: usize, j: u64, x: &[Frame], y: &[Frame]) -> Provenance {
    if role(i, j) != Role::Tx {
        return Provenance::empty();
    }
    let m = if n % 2 == 1 { n } else { n + 1 } as i64;
    let (i, j) = (i as i64, j as i64);
    let xi = (j - i + 2) / 2;
    let yi = (j + i - m + 1) / 2;
    let live = |frames: &[Frame], k: i64| k >= 1 && frames.get(k as usize - 1).is_some_and(|f| !f.is_null());
    let mut p = Provenance::empty();
    if live(x, xi) {
        p.toggle(Label::X(xi as u64));
    }
    if live(y, yi) {
        p.toggle(Label::Y(yi as u64));
    }
    p
}

fn check_schedule(run: &ChainRun, x: &[Frame], y: &[Frame]) {
    let n = run.n;
    for rec in &run.trace {
        let sent = |i: usize| scheduled(n, i, rec.slot, x, y);
        let want = match rec.role {
            Role::Tx => sent(rec.node),
            Role::Rx => {
                let left = if rec.node > 1 { sent(rec.node - 1) } else { Provenance::empty() };
                let right = if rec.node < n { sent(rec.node + 1) } else { Provenance::empty() };
                left.xor(&right)
            }
        };
        assert_eq!(rec.frame.tags, want, "n={n} slot {} node {} ({})", rec.slot, rec.node, rec.role);
    }
}

#[test]
fn trace_matches_closed_form_schedule() {
    for n in [3, 5, 7, 4, 6] {
        let total = 10 * n as u64;
        for mode in [Mode::Bidirectional, Mode::Unidirectional] {
            let (run, x, y) = dense_run(n, mode, total);
            check_schedule(&run, &x, &y);
        }
    }
}

#[test]
fn schedule_holds_with_sparse_sources() {
    let total = 140;
    let x = frames(frames_for_slots(total), 0.5, 0);
    let y = frames(frames_for_slots(total), 0.25, 1);
    let run = run_chain(7, Mode::Bidirectional, x.clone(), y.clone(), total).unwrap();
    check_schedule(&run, &x, &y);
}

#[test]
fn half_duplex_parity() {
    let (run, _, _) = dense_run(9, Mode::Bidirectional, 90);
    for rec in &run.trace {
        let expect = if rec.slot % 2 == rec.node as u64 % 2 { Role::Tx } else { Role::Rx };
        assert_eq!(rec.role, expect);
    }
    // exactly one record per (slot, node)
    assert_eq!(run.trace.len(), 9 * 90);
}

#[test]
fn every_frame_delivered_once_in_order() {
    for n in [3, 5, 7, 9] {
        let total = 10 * n as u64;
        let (run, _, _) = dense_run(n, Mode::Bidirectional, total);
        let xs: Vec<u64> =
            run.deliveries.iter().filter_map(|d| if let Label::X(l) = d.label { Some(l) } else { None }).collect();
        let ys: Vec<u64> =
            run.deliveries.iter().filter_map(|d| if let Label::Y(l) = d.label { Some(l) } else { None }).collect();
        let expected: Vec<u64> = (1..=xs.len() as u64).collect();
        assert_eq!(xs, expected, "n={n}");
        assert_eq!(ys, expected, "n={n}");
        assert!(xs.len() as u64 >= (total - n as u64) / 2 - 1, "n={n}: only {} delivered", xs.len());
    }
}

#[test]
fn decode_slots_follow_identities() {
    for n in [3, 5, 7, 9] {
        let (run, _, _) = dense_run(n, Mode::Bidirectional, 10 * n as u64);
        for d in &run.deliveries {
            let k = match d.label {
                Label::X(l) | Label::Y(l) => l as i64,
            };
            assert_eq!(d.slot % 2, 0, "odd chains decode in even slots");
            assert_eq!(k, (d.slot as i64 - n as i64 + 3) / 2);
        }
    }
}

#[test]
fn dense_throughput_is_half() {
    for n in [3, 5, 7, 9] {
        let total = 10 * n as u64;
        let (run, _, _) = dense_run(n, Mode::Bidirectional, total);
        assert_eq!(run.throughput.forward_rate, 0.5, "n={n}");
        assert_eq!(run.throughput.reverse_rate, 0.5, "n={n}");
        let (run, _, _) = dense_run(n, Mode::Unidirectional, total);
        assert_eq!(run.throughput.forward_rate, 0.5, "n={n}");
        assert_eq!(run.throughput.reverse_rate, 0.0, "n={n}");
    }
}

#[test]
fn relays_never_idle_under_dense_traffic() {
    for n in [3, 5, 7, 9] {
        let (run, _, _) = dense_run(n, Mode::Unidirectional, 10 * n as u64);
        for rec in run.trace.iter().filter(|r| r.role == Role::Tx && r.slot >= r.node as u64) {
            assert!(!rec.frame.is_null(), "n={n}: node {} idle in slot {}", rec.node, rec.slot);
        }
    }
}

#[test]
fn asymmetric_rates() {
    let total = 400;
    let x = frames(frames_for_slots(total), 0.5, 0);
    let y = frames(frames_for_slots(total), 0.25, 1);
    let run = run_chain(7, Mode::Bidirectional, x, y, total).unwrap();
    assert!((run.throughput.forward_rate - 0.5).abs() < 0.02);
    assert!((run.throughput.reverse_rate - 0.25).abs() < 0.02, "{:?}", run.throughput);
}

#[test]
fn three_node_slot_counts() {
    let mut ns = NoiseStream::new(1, 0);
    let x = Frame::random(32, &mut ns).unwrap();
    let y = Frame::random(32, &mut ns).unwrap();
    let slots: Vec<u32> = ExchangeScheme::ALL.iter().map(|&s| three_node_exchange(s, &x, &y).unwrap().slots).collect();
    assert_eq!(slots, [4, 3, 2]);

    // the chain protocol completes one exchange in two slots as well
    let run = run_chain(3, Mode::Bidirectional, vec![x], vec![y], 12).unwrap();
    let first: Vec<u64> = run.deliveries.iter().map(|d| d.slot).collect();
    assert_eq!(first, [2, 2]);
}

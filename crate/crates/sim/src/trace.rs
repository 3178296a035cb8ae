//! CSV trace records.
//!
//! One row per control tick. Numbers are written in scientific notation
//! with nine significant digits; `support` is `L` or `R`; `kick_phase` is
//! -1 while no kick runs; `flags` lists event names joined by `|`, or `-`.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use lipwalk::Side;

/// The header row, byte for byte.
pub const TRACE_HEADER: &str = "t,com_x,com_y,com_vx,com_vy,est_x,est_vx,est_ax,est_y,est_vy,est_ay,\
zmp_x,zmp_y,step_duration,step_x,step_y,support,gait_phase,kick_phase,ball_x,ball_y,flags";

const COLUMNS: usize = 22;

/// Events that happened during the tick ending at a record.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Flags(u16);

impl Flags {
    pub const PUSH: Flags = Flags(1 << 0);
    pub const EXCHANGE: Flags = Flags(1 << 1);
    pub const DURATION_SAT: Flags = Flags(1 << 2);
    pub const REACH_SAT: Flags = Flags(1 << 3);
    pub const ZMP_SAT: Flags = Flags(1 << 4);
    pub const UNCAPTURABLE: Flags = Flags(1 << 5);
    pub const PASS: Flags = Flags(1 << 6);
    pub const DETECTION: Flags = Flags(1 << 7);
    pub const KICK: Flags = Flags(1 << 8);
    pub const CONTACT: Flags = Flags(1 << 9);
    pub const GOAL: Flags = Flags(1 << 10);
    pub const FALL: Flags = Flags(1 << 11);

    const NAMES: [(Flags, &'static str); 12] = [
        (Flags::PUSH, "push"),
        (Flags::EXCHANGE, "exchange"),
        (Flags::DURATION_SAT, "duration_sat"),
        (Flags::REACH_SAT, "reach_sat"),
        (Flags::ZMP_SAT, "zmp_sat"),
        (Flags::UNCAPTURABLE, "uncapturable"),
        (Flags::PASS, "pass"),
        (Flags::DETECTION, "detection"),
        (Flags::KICK, "kick"),
        (Flags::CONTACT, "contact"),
        (Flags::GOAL, "goal"),
        (Flags::FALL, "fall"),
    ];

    pub const fn empty() -> Flags {
        Flags(0)
    }

    pub fn contains(self, other: Flags) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn insert(&mut self, other: Flags) {
        self.0 |= other.0;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::BitOr for Flags {
    type Output = Flags;
    fn bitor(self, rhs: Flags) -> Flags {
        Flags(self.0 | rhs.0)
    }
}

impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        let mut first = true;
        for (flag, name) in Flags::NAMES {
            if self.contains(flag) {
                if !first {
                    f.write_str("|")?;
                }
                f.write_str(name)?;
                first = false;
            }
        }
        Ok(())
    }
}

impl FromStr for Flags {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Flags, TraceError> {
        if s == "-" {
            return Ok(Flags::empty());
        }
        let mut flags = Flags::empty();
        for part in s.split('|') {
            let (flag, _) = Flags::NAMES
                .iter()
                .find(|(_, name)| *name == part)
                .ok_or_else(|| TraceError::Field {
                    row: 0,
                    column: "flags",
                    message: format!("unknown flag {part:?}"),
                })?;
            flags.insert(*flag);
        }
        Ok(flags)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    pub t: f64,
    pub com: [f64; 2],
    pub com_vel: [f64; 2],
    /// Estimated (position, velocity, acceleration) for x then y.
    pub est: [[f64; 3]; 2],
    /// ZMP relative to the support foot.
    pub zmp: [f64; 2],
    /// Total duration of the current step.
    pub step_duration: f64,
    /// Planned landing offset relative to the support foot.
    pub step: [f64; 2],
    pub support: Side,
    pub gait_phase: f64,
    pub kick_phase: f64,
    pub ball: [f64; 2],
    pub flags: Flags,
}

impl TraceRecord {
    fn numbers(&self) -> [f64; 20] {
        [
            self.t,
            self.com[0],
            self.com[1],
            self.com_vel[0],
            self.com_vel[1],
            self.est[0][0],
            self.est[0][1],
            self.est[0][2],
            self.est[1][0],
            self.est[1][1],
            self.est[1][2],
            self.zmp[0],
            self.zmp[1],
            self.step_duration,
            self.step[0],
            self.step[1],
            self.gait_phase,
            self.kick_phase,
            self.ball[0],
            self.ball[1],
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.numbers().iter().all(|x| x.is_finite())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TraceError {
    #[error("header mismatch: expected {expected:?}, found {found:?}")]
    Header { expected: &'static str, found: String },
    #[error("row {row}: expected {COLUMNS} columns, found {found}")]
    Columns { row: usize, found: usize },
    #[error("row {row}, column {column}: {message}")]
    Field {
        row: usize,
        column: &'static str,
        message: String,
    },
    #[error("row {row}: time does not increase")]
    NonIncreasing { row: usize },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn number(x: f64) -> String {
    format!("{x:.8e}")
}

fn side_char(side: Side) -> char {
    match side {
        Side::Left => 'L',
        Side::Right => 'R',
    }
}

/// Writes the header and all records.
pub fn write_trace<W: Write>(records: &[TraceRecord], out: W) -> Result<(), TraceError> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(TRACE_HEADER.split(','))?;
    let mut row: Vec<String> = Vec::with_capacity(COLUMNS);
    for r in records {
        row.clear();
        let n = r.numbers();
        row.extend(n[..16].iter().map(|&x| number(x)));
        row.push(side_char(r.support).to_string());
        row.extend(n[16..].iter().map(|&x| number(x)));
        row.push(r.flags.to_string());
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn trace_to_string(records: &[TraceRecord]) -> String {
    let mut buf = Vec::new();
    write_trace(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("trace is ASCII")
}

const NAMES: [&str; COLUMNS] = [
    "t", "com_x", "com_y", "com_vx", "com_vy", "est_x", "est_vx", "est_ax", "est_y", "est_vy", "est_ay", "zmp_x",
    "zmp_y", "step_duration", "step_x", "step_y", "support", "gait_phase", "kick_phase", "ball_x", "ball_y", "flags",
];

/// Parses a trace written by [`write_trace`], checking the header and the
/// time ordering.
pub fn read_trace<R: Read>(input: R) -> Result<Vec<TraceRecord>, TraceError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut rows = reader.records();
    let header = match rows.next() {
        Some(h) => h?,
        None => {
            return Err(TraceError::Header {
                expected: TRACE_HEADER,
                found: String::new(),
            })
        }
    };
    let found = header.iter().collect::<Vec<_>>().join(",");
    if found != TRACE_HEADER {
        return Err(TraceError::Header {
            expected: TRACE_HEADER,
            found,
        });
    }

    let mut out = Vec::new();
    for (i, row) in rows.enumerate() {
        let row_no = i + 1;
        let row = row?;
        if row.len() != COLUMNS {
            return Err(TraceError::Columns {
                row: row_no,
                found: row.len(),
            });
        }
        let num = |c: usize| -> Result<f64, TraceError> {
            row[c].parse::<f64>().map_err(|e| TraceError::Field {
                row: row_no,
                column: NAMES[c],
                message: e.to_string(),
            })
        };
        let support = match &row[16] {
            "L" => Side::Left,
            "R" => Side::Right,
            other => {
                return Err(TraceError::Field {
                    row: row_no,
                    column: "support",
                    message: format!("expected L or R, got {other:?}"),
                })
            }
        };
        let flags = row[21].parse::<Flags>().map_err(|e| match e {
            TraceError::Field { column, message, .. } => TraceError::Field {
                row: row_no,
                column,
                message,
            },
            other => other,
        })?;
        let record = TraceRecord {
            t: num(0)?,
            com: [num(1)?, num(2)?],
            com_vel: [num(3)?, num(4)?],
            est: [[num(5)?, num(6)?, num(7)?], [num(8)?, num(9)?, num(10)?]],
            zmp: [num(11)?, num(12)?],
            step_duration: num(13)?,
            step: [num(14)?, num(15)?],
            support,
            gait_phase: num(17)?,
            kick_phase: num(18)?,
            ball: [num(19)?, num(20)?],
            flags,
        };
        if let Some(prev) = out.last().map(|r: &TraceRecord| r.t) {
            if !(record.t > prev) {
                return Err(TraceError::NonIncreasing { row: row_no });
            }
        }
        out.push(record);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(t: f64) -> TraceRecord {
        TraceRecord {
            t,
            com: [0.1, -0.15],
            com_vel: [0.0, 0.4],
            est: [[0.1, 0.0, 0.0], [-0.15, 0.4, 1.6]],
            zmp: [-0.06, 0.0],
            step_duration: 0.45,
            step: [0.0, -0.3],
            support: Side::Left,
            gait_phase: 0.25,
            kick_phase: -1.0,
            ball: [1.0, 0.0],
            flags: Flags::PUSH | Flags::ZMP_SAT,
        }
    }

    #[test]
    fn header_is_exact() {
        let text = trace_to_string(&[]);
        assert_eq!(text, format!("{TRACE_HEADER}\n"));
        assert_eq!(TRACE_HEADER.split(',').collect::<Vec<_>>(), NAMES);
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(number(0.123456789123), "1.23456789e-1");
        assert_eq!(number(-2.0), "-2.00000000e0");
        assert_eq!(number(0.0), "0.00000000e0");
    }

    #[test]
    fn round_trip_at_nine_digits() {
        let records = vec![record(0.0), record(0.005)];
        let text = trace_to_string(&records);
        let back = read_trace(text.as_bytes()).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1].flags, Flags::PUSH | Flags::ZMP_SAT);
        assert_eq!(back[0].support, Side::Left);
        assert_eq!(trace_to_string(&back), text);
        assert!(text.ends_with('\n'));
        assert!(text.lines().nth(1).unwrap().ends_with(",push|zmp_sat"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(read_trace("t,x\n".as_bytes()), Err(TraceError::Header { .. })));
        let twice = trace_to_string(&[record(0.0)]) + &trace_to_string(&[record(0.0)]).lines().nth(1).unwrap().to_string();
        assert!(matches!(read_trace(twice.as_bytes()), Err(TraceError::NonIncreasing { row: 2 })));
        let bad_flag = trace_to_string(&[record(0.0)]).replace("push|zmp_sat", "shove");
        assert!(matches!(
            read_trace(bad_flag.as_bytes()),
            Err(TraceError::Field { row: 1, column: "flags", .. })
        ));
    }

    proptest::proptest! {
        #[test]
        fn numbers_keep_nine_digits(x in -1e6f64..1e6, bits in 0u16..1 << 12) {
            let mut r = record(0.0);
            r.com[0] = x;
            r.flags = Flags(bits);
            let back = read_trace(trace_to_string(&[r]).as_bytes()).unwrap();
            proptest::prop_assert!((back[0].com[0] - x).abs() <= 1e-8 * x.abs().max(1e-300));
            proptest::prop_assert_eq!(back[0].flags, r.flags);
        }
    }
}

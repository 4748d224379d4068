//! NMR pulse-sequence algebra: hard rf rotations on either spin and free
//! evolutions under the scalar coupling, composed into 4x4 unitaries.
//!
//! Rotations are instantaneous unitaries exp(-i angle sigma/2) whose
//! wall-clock duration is still charged to the budget (10.55 us on the
//! hydrogen channel, 9.45 us on carbon); scalar coupling during a pulse is
//! neglected. Free evolution applies exp(-i 2 pi (J/4) t sigma_z ⊗ sigma_z).
//! The hydrogen spin carries the interferometer path, the carbon spin the
//! controller, and the tensor ordering matches the circuit module (path
//! leftmost).
//!
//! Sequence files are line oriented: an optional `J <Hz>` header, then one
//! op per line, `ROT <H|C> <X|Y> <angle>` or `FREE <seconds>`, with `#`
//! comments. Angle and duration fields accept arithmetic expressions over
//! `pi`, `j` (the coupling in Hz) and, when supplied by the caller, `alpha`
//! and `theta`, so one file describes a whole family of circuit settings.

use crate::qmath::{tensor_product, ComplexMatrix};
use crate::{Error, Result};
use num_complex::Complex64;

/// Coupling constant of the chloroform 1H-13C pair, in Hz.
pub const DEFAULT_COUPLING_HZ: f64 = 215.1;
/// Wall-clock duration of one hydrogen-channel pulse, in seconds.
pub const HYDROGEN_PULSE_SECONDS: f64 = 10.55e-6;
/// Wall-clock duration of one carbon-channel pulse, in seconds.
pub const CARBON_PULSE_SECONDS: f64 = 9.45e-6;

/// Which spin a rotation addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nucleus {
    /// 1H: the path qubit, leftmost tensor factor.
    Hydrogen,
    /// 13C: the controller qubit.
    Carbon,
}

impl Nucleus {
    pub fn pulse_seconds(self) -> f64 {
        match self {
            Nucleus::Hydrogen => HYDROGEN_PULSE_SECONDS,
            Nucleus::Carbon => CARBON_PULSE_SECONDS,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Nucleus::Hydrogen => "H",
            Nucleus::Carbon => "C",
        }
    }
}

/// Transverse rotation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// One step of a pulse sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseOp {
    Rotation {
        target: Nucleus,
        axis: Axis,
        angle: f64,
    },
    FreeEvolution {
        duration: f64,
    },
}

/// Ordered pulse program with its scalar-coupling constant.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    pub ops: Vec<PulseOp>,
    pub coupling_hz: f64,
}

impl PulseSequence {
    pub fn new(ops: Vec<PulseOp>) -> Self {
        Self {
            ops,
            coupling_hz: DEFAULT_COUPLING_HZ,
        }
    }
}

/// Wall-clock accounting of a compiled sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceBudget {
    /// Free-evolution time plus per-rotation pulse durations, in seconds.
    pub total_duration: f64,
    pub rotation_count: usize,
}

/// exp(-i angle sigma_axis / 2) on the target spin, identity on the other.
pub fn rotation_unitary(target: Nucleus, axis: Axis, angle: f64) -> ComplexMatrix {
    let (s, c) = (angle / 2.0).sin_cos();
    let cos = Complex64::new(c, 0.0);
    let local = match axis {
        Axis::X => {
            let off = Complex64::new(0.0, -s);
            ComplexMatrix::from_rows(&[&[cos, off], &[off, cos]])
        }
        Axis::Y => {
            let sin = Complex64::new(s, 0.0);
            ComplexMatrix::from_rows(&[&[cos, -sin], &[sin, cos]])
        }
    };
    match target {
        Nucleus::Hydrogen => tensor_product(&local, &ComplexMatrix::identity(2)),
        Nucleus::Carbon => tensor_product(&ComplexMatrix::identity(2), &local),
    }
}

/// exp(-i 2 pi (J/4) t sigma_z ⊗ sigma_z): diagonal phases e^{∓i phi} with
/// phi = 2 pi J t / 4 and sign pattern (+, -, -, +).
pub fn j_evolution_unitary(duration: f64, coupling_hz: f64) -> Result<ComplexMatrix> {
    if !duration.is_finite() || duration < 0.0 {
        return Err(Error::OutOfRange {
            name: "duration",
            value: duration,
            range: "[0, ...)",
        });
    }
    let phi = 2.0 * std::f64::consts::PI * coupling_hz * duration / 4.0;
    let minus = Complex64::from_polar(1.0, -phi);
    let plus = Complex64::from_polar(1.0, phi);
    let mut u = ComplexMatrix::zeros(4, 4);
    u[(0, 0)] = minus;
    u[(1, 1)] = plus;
    u[(2, 2)] = plus;
    u[(3, 3)] = minus;
    Ok(u)
}

/// A compiled sequence: its unitary and wall-clock budget.
#[derive(Debug, Clone)]
pub struct CompiledSequence {
    pub unitary: ComplexMatrix,
    pub budget: SequenceBudget,
}

/// Multiplies the op unitaries in order (leftmost op applied first) and
/// totals the duration budget.
pub fn compile(sequence: &PulseSequence) -> Result<CompiledSequence> {
    if sequence.ops.is_empty() {
        return Err(Error::EmptySequence);
    }
    if !sequence.coupling_hz.is_finite() || sequence.coupling_hz <= 0.0 {
        return Err(Error::OutOfRange {
            name: "coupling_hz",
            value: sequence.coupling_hz,
            range: "(0, ...)",
        });
    }
    let mut unitary = ComplexMatrix::identity(4);
    let mut total_duration = 0.0;
    let mut rotation_count = 0;
    for op in &sequence.ops {
        let step = match *op {
            PulseOp::Rotation {
                target,
                axis,
                angle,
            } => {
                if !angle.is_finite() {
                    return Err(Error::NonFinite);
                }
                rotation_count += 1;
                total_duration += target.pulse_seconds();
                rotation_unitary(target, axis, angle)
            }
            PulseOp::FreeEvolution { duration } => {
                total_duration += duration;
                j_evolution_unitary(duration, sequence.coupling_hz)?
            }
        };
        unitary = step.mul(&unitary);
    }
    Ok(CompiledSequence {
        unitary,
        budget: SequenceBudget {
            total_duration,
            rotation_count,
        },
    })
}

/// Outcome of a global-phase-insensitive unitary comparison.
#[derive(Debug, Clone, Copy)]
pub struct PhaseEquivalence {
    pub equal: bool,
    /// Phase phi minimising ||U - e^{i phi} V|| at the anchor entry.
    pub phase: f64,
    pub max_deviation: f64,
}

/// Tests whether U = e^{i phi} V for some phi, within an entrywise tolerance.
/// The phase is extracted from the largest-magnitude entry of V.
pub fn equivalent_up_to_phase(
    u: &ComplexMatrix,
    v: &ComplexMatrix,
    tol: f64,
) -> Result<PhaseEquivalence> {
    if u.rows() != v.rows() || u.cols() != v.cols() || !u.is_square() {
        return Err(Error::DimensionMismatch {
            left: u.rows(),
            right: v.rows(),
        });
    }
    for m in [u, v] {
        let defect = m.unitarity_defect();
        if defect > 1e-9 {
            return Err(Error::NotUnitary {
                defect,
                tolerance: 1e-9,
            });
        }
    }
    let n = u.rows();
    let mut anchor = (0, 0);
    let mut largest = -1.0;
    for i in 0..n {
        for j in 0..n {
            let magnitude = v[(i, j)].norm();
            if magnitude > largest {
                largest = magnitude;
                anchor = (i, j);
            }
        }
    }
    let ratio = u[anchor] / v[anchor];
    let phase = ratio.arg();
    let rotated = v.scale(Complex64::from_polar(1.0, phase));
    let max_deviation = u.max_abs_diff(&rotated);
    Ok(PhaseEquivalence {
        equal: max_deviation <= tol,
        phase,
        max_deviation,
    })
}

/// Caller-supplied bindings for the symbolic angles a sequence file may use.
#[derive(Debug, Clone, Copy, Default)]
pub struct SequenceParams {
    pub alpha: Option<f64>,
    pub theta: Option<f64>,
}

/// Parses the line-oriented sequence format, evaluating angle and duration
/// expressions against the supplied parameters.
pub fn parse_sequence(text: &str, params: &SequenceParams) -> Result<PulseSequence> {
    let mut ops = Vec::new();
    let mut coupling: Option<f64> = None;
    for (number, raw) in text.lines().enumerate() {
        let line_no = number + 1;
        let fail = |message: &str| Error::SequenceParse {
            line: line_no,
            message: message.to_string(),
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().expect("non-empty line").to_ascii_uppercase();
        match keyword.as_str() {
            "J" => {
                if coupling.is_some() {
                    return Err(fail("duplicate J header"));
                }
                if !ops.is_empty() {
                    return Err(fail("J header must precede the first op"));
                }
                let value = tokens.next().ok_or_else(|| fail("J needs a value in Hz"))?;
                let hz = expr::evaluate(value, params, None)
                    .map_err(|m| fail(&format!("bad coupling: {m}")))?;
                if !hz.is_finite() || hz <= 0.0 {
                    return Err(fail("coupling must be positive"));
                }
                coupling = Some(hz);
            }
            "ROT" => {
                let target = match tokens.next().map(str::to_ascii_uppercase).as_deref() {
                    Some("H") => Nucleus::Hydrogen,
                    Some("C") => Nucleus::Carbon,
                    _ => return Err(fail("ROT target must be H or C")),
                };
                let axis = match tokens.next().map(str::to_ascii_uppercase).as_deref() {
                    Some("X") => Axis::X,
                    Some("Y") => Axis::Y,
                    _ => return Err(fail("ROT axis must be X or Y")),
                };
                let rest: Vec<&str> = tokens.collect();
                if rest.is_empty() {
                    return Err(fail("ROT needs an angle"));
                }
                let angle = expr::evaluate(&rest.join(" "), params, coupling)
                    .map_err(|m| fail(&format!("bad angle: {m}")))?;
                ops.push(PulseOp::Rotation {
                    target,
                    axis,
                    angle,
                });
            }
            "FREE" => {
                let rest: Vec<&str> = tokens.collect();
                if rest.is_empty() {
                    return Err(fail("FREE needs a duration in seconds"));
                }
                let duration = expr::evaluate(&rest.join(" "), params, coupling)
                    .map_err(|m| fail(&format!("bad duration: {m}")))?;
                if !duration.is_finite() || duration < 0.0 {
                    return Err(fail("duration must be nonnegative"));
                }
                ops.push(PulseOp::FreeEvolution { duration });
            }
            other => {
                return Err(fail(&format!(
                    "unknown keyword {other:?} (expected J, ROT or FREE)"
                )))
            }
        }
    }
    Ok(PulseSequence {
        ops,
        coupling_hz: coupling.unwrap_or(DEFAULT_COUPLING_HZ),
    })
}

/// Source text of the bundled reference decomposition for a circuit. The
/// same files ship in the repository under `data/` for use with the CLI.
pub fn reference_sequence_source(kind: crate::interferometer::CircuitKind) -> &'static str {
    match kind {
        crate::interferometer::CircuitKind::Qdce => include_str!("../data/qdce.seq"),
        crate::interferometer::CircuitKind::Qcre => include_str!("../data/qcre.seq"),
    }
}

/// Parses the bundled reference sequence at a circuit setting.
pub fn reference_sequence(
    kind: crate::interferometer::CircuitKind,
    alpha: f64,
    theta: f64,
) -> Result<PulseSequence> {
    parse_sequence(
        reference_sequence_source(kind),
        &SequenceParams {
            alpha: Some(alpha),
            theta: Some(theta),
        },
    )
}

mod expr {
    //! Minimal arithmetic expressions: + - * /, unary minus, parentheses,
    //! float literals, and the identifiers pi, alpha, theta, j.

    use super::SequenceParams;

    pub fn evaluate(
        text: &str,
        params: &SequenceParams,
        coupling: Option<f64>,
    ) -> std::result::Result<f64, String> {
        let tokens = tokenize(text)?;
        let mut parser = Parser {
            tokens,
            position: 0,
            params: *params,
            coupling,
        };
        let value = parser.expression()?;
        if parser.position != parser.tokens.len() {
            return Err(format!("unexpected trailing input in {text:?}"));
        }
        if !value.is_finite() {
            return Err(format!("expression {text:?} is not finite"));
        }
        Ok(value)
    }

    #[derive(Debug, Clone, PartialEq)]
    enum Token {
        Number(f64),
        Ident(String),
        Plus,
        Minus,
        Star,
        Slash,
        Open,
        Close,
    }

    fn tokenize(text: &str) -> std::result::Result<Vec<Token>, String> {
        let mut tokens = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            match c {
                ' ' | '\t' => i += 1,
                '+' => {
                    tokens.push(Token::Plus);
                    i += 1;
                }
                '-' => {
                    tokens.push(Token::Minus);
                    i += 1;
                }
                '*' => {
                    tokens.push(Token::Star);
                    i += 1;
                }
                '/' => {
                    tokens.push(Token::Slash);
                    i += 1;
                }
                '(' => {
                    tokens.push(Token::Open);
                    i += 1;
                }
                ')' => {
                    tokens.push(Token::Close);
                    i += 1;
                }
                _ if c.is_ascii_digit() || c == '.' => {
                    let start = i;
                    while i < chars.len()
                        && (chars[i].is_ascii_digit()
                            || chars[i] == '.'
                            || chars[i] == 'e'
                            || chars[i] == 'E'
                            || ((chars[i] == '+' || chars[i] == '-')
                                && i > start
                                && (chars[i - 1] == 'e' || chars[i - 1] == 'E')))
                    {
                        i += 1;
                    }
                    let literal: String = chars[start..i].iter().collect();
                    let value = literal
                        .parse::<f64>()
                        .map_err(|_| format!("bad number {literal:?}"))?;
                    tokens.push(Token::Number(value));
                }
                _ if c.is_ascii_alphabetic() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                        i += 1;
                    }
                    let ident: String = chars[start..i].iter().collect();
                    tokens.push(Token::Ident(ident.to_ascii_lowercase()));
                }
                _ => return Err(format!("unexpected character {c:?}")),
            }
        }
        Ok(tokens)
    }

    struct Parser {
        tokens: Vec<Token>,
        position: usize,
        params: SequenceParams,
        coupling: Option<f64>,
    }

    impl Parser {
        fn peek(&self) -> Option<&Token> {
            self.tokens.get(self.position)
        }

        fn advance(&mut self) -> Option<Token> {
            let token = self.tokens.get(self.position).cloned();
            if token.is_some() {
                self.position += 1;
            }
            token
        }

        fn expression(&mut self) -> std::result::Result<f64, String> {
            let mut value = self.term()?;
            while let Some(token) = self.peek() {
                match token {
                    Token::Plus => {
                        self.advance();
                        value += self.term()?;
                    }
                    Token::Minus => {
                        self.advance();
                        value -= self.term()?;
                    }
                    _ => break,
                }
            }
            Ok(value)
        }

        fn term(&mut self) -> std::result::Result<f64, String> {
            let mut value = self.factor()?;
            while let Some(token) = self.peek() {
                match token {
                    Token::Star => {
                        self.advance();
                        value *= self.factor()?;
                    }
                    Token::Slash => {
                        self.advance();
                        let divisor = self.factor()?;
                        value /= divisor;
                    }
                    _ => break,
                }
            }
            Ok(value)
        }

        fn factor(&mut self) -> std::result::Result<f64, String> {
            match self.advance() {
                Some(Token::Minus) => Ok(-self.factor()?),
                Some(Token::Plus) => self.factor(),
                Some(Token::Number(value)) => Ok(value),
                Some(Token::Ident(name)) => match name.as_str() {
                    "pi" => Ok(std::f64::consts::PI),
                    "alpha" => self
                        .params
                        .alpha
                        .ok_or_else(|| "alpha used but not provided".to_string()),
                    "theta" => self
                        .params
                        .theta
                        .ok_or_else(|| "theta used but not provided".to_string()),
                    "j" => self
                        .coupling
                        .ok_or_else(|| "j used before the J header".to_string()),
                    other => Err(format!("unknown identifier {other:?}")),
                },
                Some(Token::Open) => {
                    let value = self.expression()?;
                    match self.advance() {
                        Some(Token::Close) => Ok(value),
                        _ => Err("missing closing parenthesis".to_string()),
                    }
                }
                Some(token) => Err(format!("unexpected token {token:?}")),
                None => Err("unexpected end of expression".to_string()),
            }
        }
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn arithmetic_and_identifiers() {
            let params = SequenceParams {
                alpha: Some(1.5),
                theta: Some(0.25),
            };
            assert!((evaluate("pi/2", &params, None).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
            assert!((evaluate("-alpha/2", &params, None).unwrap() + 0.75).abs() < 1e-15);
            assert!(
                (evaluate("theta + pi", &params, None).unwrap() - 3.391592653589793).abs() < 1e-15
            );
            assert!(
                (evaluate("1/(4*j)", &params, Some(215.1)).unwrap() - 1.0 / 860.4).abs() < 1e-18
            );
            assert!((evaluate("2.5e-3", &params, None).unwrap() - 0.0025).abs() < 1e-18);
            assert!((evaluate("-(1 - 3) * 2", &params, None).unwrap() - 4.0).abs() < 1e-15);
            assert!(evaluate("alpha", &SequenceParams::default(), None).is_err());
            assert!(evaluate("j", &params, None).is_err());
            assert!(evaluate("(1", &params, None).is_err());
            assert!(evaluate("1 2", &params, None).is_err());
            assert!(evaluate("2up", &params, None).is_err());
        }
    }
}

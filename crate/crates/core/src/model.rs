//! Spin Hamiltonians for XXZ and Ising chains with a z-axis
//! Dzyaloshinskii-Moriya term.
//!
//! Conventions used everywhere in the crate:
//! * sites are numbered from 1, and site 1 is the most significant bit of
//!   the computational-basis index;
//! * basis bit 0 is spin up (`σ^z = +1`);
//! * every bond carries the prefactor `j/4` in front of Pauli products.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, ComplexMatrix, DIM_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// `(j/4) Σ [xx + yy ± Δ zz + D (xy − yx)]`
    XxzDm,
    /// `(j/4) Σ [zz + D (xy − yx)]`
    IsingDm,
    /// Ising with DM plus `(j/4) h Σ z`.
    IsingDmField,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Open,
    Periodic,
}

/// Sign in front of the `Δ σ^z σ^z` term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeltaSign {
    Plus,
    Minus,
}

impl DeltaSign {
    pub fn factor(self) -> f64 {
        match self {
            DeltaSign::Plus => 1.0,
            DeltaSign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            DeltaSign::Plus => DeltaSign::Minus,
            DeltaSign::Minus => DeltaSign::Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Model parameters that may be varied by sweeps and root finders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    J,
    Delta,
    D,
    H,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::J => "j",
            Param::Delta => "delta",
            Param::D => "d",
            Param::H => "h",
        }
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "j" => Ok(Param::J),
            "delta" => Ok(Param::Delta),
            "d" => Ok(Param::D),
            "h" => Ok(Param::H),
            other => Err(Error::Parse(format!("unknown model parameter `{other}`"))),
        }
    }
}

/// Full parameterization of one Hamiltonian.
///
/// For the Ising kinds `j` plays the role of the Ising exchange and `delta`
/// must stay 0; `h` is only meaningful for [`ModelKind::IsingDmField`].
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub j: f64,
    pub delta: f64,
    pub d: f64,
    pub h: f64,
    pub n: usize,
    pub boundary: Boundary,
    pub delta_sign: DeltaSign,
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self {
            kind: ModelKind::XxzDm,
            j: 1.0,
            delta: 0.0,
            d: 0.0,
            h: 0.0,
            n: 3,
            boundary: Boundary::Open,
            delta_sign: DeltaSign::Plus,
        }
    }
}

impl ModelSpec {
    /// Three-site open XXZ chain with DM coupling, `+Δ` convention.
    pub fn xxz(j: f64, delta: f64, d: f64) -> Self {
        Self {
            j,
            delta,
            d,
            ..Self::default()
        }
    }

    pub fn ising_dm(j: f64, d: f64) -> Self {
        Self {
            kind: ModelKind::IsingDm,
            j,
            d,
            ..Self::default()
        }
    }

    pub fn ising_dm_field(j: f64, d: f64, h: f64) -> Self {
        Self {
            kind: ModelKind::IsingDmField,
            j,
            d,
            h,
            ..Self::default()
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_delta_sign(mut self, sign: DeltaSign) -> Self {
        self.delta_sign = sign;
        self
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn param(&self, p: Param) -> f64 {
        match p {
            Param::J => self.j,
            Param::Delta => self.delta,
            Param::D => self.d,
            Param::H => self.h,
        }
    }

    pub fn set_param(&mut self, p: Param, value: f64) {
        match p {
            Param::J => self.j = value,
            Param::Delta => self.delta = value,
            Param::D => self.d = value,
            Param::H => self.h = value,
        }
    }

    pub fn with_param(mut self, p: Param, value: f64) -> Self {
        self.set_param(p, value);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::contract(format!("need at least 2 qubits, got {}", self.n)));
        }
        if self.n >= usize::BITS as usize || (1usize << self.n) > DIM_CAP {
            return Err(Error::Dimension {
                requested: 1usize.checked_shl(self.n as u32).unwrap_or(usize::MAX),
                cap: DIM_CAP,
            });
        }
        if self.boundary == Boundary::Periodic && self.n < 3 {
            return Err(Error::contract("a periodic chain needs at least 3 sites"));
        }
        for (name, v) in [("j", self.j), ("delta", self.delta), ("d", self.d), ("h", self.h)] {
            if !v.is_finite() {
                return Err(Error::contract(format!("{name} must be finite, got {v}")));
            }
        }
        if self.kind != ModelKind::XxzDm && self.delta != 0.0 {
            return Err(Error::contract("delta must be 0 for the Ising kinds"));
        }
        if self.kind != ModelKind::IsingDmField && self.h != 0.0 {
            return Err(Error::contract("a field h is only supported by kind ising-dm-field"));
        }
        Ok(())
    }

    /// Nearest-neighbour bonds `(i, i+1)`; periodic chains add `(n, 1)`.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut bonds: Vec<(usize, usize)> = (1..self.n).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Periodic {
            bonds.push((self.n, 1));
        }
        bonds
    }

    /// Apply one `key=value` assignment from the flat textual form.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("`{key}` expects a number, got `{v}`")))
        };
        match key.trim() {
            "kind" => self.kind = value.trim().parse()?,
            "j" => self.j = num(value)?,
            "delta" => self.delta = num(value)?,
            "d" => self.d = num(value)?,
            "h" => self.h = num(value)?,
            "n" => {
                self.n = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("`n` expects a count, got `{value}`")))?
            }
            "boundary" => self.boundary = value.trim().parse()?,
            "delta_sign" => self.delta_sign = value.trim().parse()?,
            other => return Err(Error::Parse(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Parse the flat `key=value` form (one pair per line, `#` starts a comment),
    /// starting from `self` so that unspecified keys keep their value.
    pub fn merge_kv_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected key=value, got `{line}`", lineno + 1))
            })?;
            self.apply_kv(k, v)
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn to_kv_string(&self) -> String {
        self.to_string()
    }
}

/// Canonical `key=value` lines in fixed key order.
impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind={}", self.kind)?;
        writeln!(f, "j={}", self.j)?;
        writeln!(f, "delta={}", self.delta)?;
        writeln!(f, "d={}", self.d)?;
        writeln!(f, "h={}", self.h)?;
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "boundary={}", self.boundary)?;
        writeln!(f, "delta_sign={}", self.delta_sign)
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut spec = ModelSpec::default();
        spec.merge_kv_text(s)?;
        Ok(spec)
    }
}

macro_rules! text_enum {
    ($ty:ty { $($variant:path => $text:literal),+ $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($variant => $text),+ })
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($variant),)+
                    other => Err(Error::Parse(format!(
                        concat!("unknown ", stringify!($ty), " `{}` (expected one of: ", $($text, " "),+ , ")"),
                        other
                    ))),
                }
            }
        }
    };
}

text_enum!(ModelKind {
    ModelKind::XxzDm => "xxz-dm",
    ModelKind::IsingDm => "ising-dm",
    ModelKind::IsingDmField => "ising-dm-field",
});
text_enum!(Boundary { Boundary::Open => "open", Boundary::Periodic => "periodic" });
text_enum!(DeltaSign { DeltaSign::Plus => "plus", DeltaSign::Minus => "minus" });

/// A weighted product of single-site Pauli operators.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    pub ops: Vec<(usize, Axis)>,
}

impl PauliTerm {
    fn new(coeff: f64, ops: &[(usize, Axis)]) -> Self {
        Self {
            coeff,
            ops: ops.to_vec(),
        }
    }

    /// Image of basis state `b` as `(amplitude, b')`.
    fn act(&self, n: usize, b: usize) -> (Complex64, usize) {
        let mut amp = Complex64::new(self.coeff, 0.0);
        let mut state = b;
        for &(site, axis) in self.ops.iter().rev() {
            let mask = 1usize << (n - site);
            let down = state & mask != 0;
            match axis {
                Axis::X => state ^= mask,
                Axis::Y => {
                    amp *= if down {
                        Complex64::new(0.0, -1.0)
                    } else {
                        Complex64::new(0.0, 1.0)
                    };
                    state ^= mask;
                }
                Axis::Z => {
                    if down {
                        amp = -amp;
                    }
                }
            }
        }
        (amp, state)
    }
}

/// The Hamiltonian as a list of Pauli products.
pub fn hamiltonian_terms(spec: &ModelSpec) -> Result<Vec<PauliTerm>> {
    spec.validate()?;
    let w = spec.j / 4.0;
    let mut terms = Vec::new();
    for (a, b) in spec.bonds() {
        match spec.kind {
            ModelKind::XxzDm => {
                terms.push(PauliTerm::new(w, &[(a, Axis::X), (b, Axis::X)]));
                terms.push(PauliTerm::new(w, &[(a, Axis::Y), (b, Axis::Y)]));
                terms.push(PauliTerm::new(
                    w * spec.delta_sign.factor() * spec.delta,
                    &[(a, Axis::Z), (b, Axis::Z)],
                ));
            }
            ModelKind::IsingDm | ModelKind::IsingDmField => {
                terms.push(PauliTerm::new(w, &[(a, Axis::Z), (b, Axis::Z)]));
            }
        }
        terms.push(PauliTerm::new(w * spec.d, &[(a, Axis::X), (b, Axis::Y)]));
        terms.push(PauliTerm::new(-w * spec.d, &[(a, Axis::Y), (b, Axis::X)]));
    }
    if spec.kind == ModelKind::IsingDmField {
        for site in 1..=spec.n {
            terms.push(PauliTerm::new(w * spec.h, &[(site, Axis::Z)]));
        }
    }
    terms.retain(|t| t.coeff != 0.0);
    Ok(terms)
}

/// Dense Hamiltonian matrix of dimension `2^n`.
pub fn build_hamiltonian(spec: &ModelSpec) -> Result<ComplexMatrix> {
    let terms = hamiltonian_terms(spec)?;
    let dim = spec.dim();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for b in 0..dim {
        for term in &terms {
            let (amp, image) = term.act(spec.n, b);
            h[(image, b)] += amp;
        }
    }
    Ok(h)
}

/// `I ⊗ … ⊗ σ^axis ⊗ … ⊗ I` with the Pauli matrix at `site` (1-based).
pub fn pauli_on_site(axis: Axis, site: usize, n: usize) -> Result<ComplexMatrix> {
    if site == 0 || site > n {
        return Err(Error::contract(format!("site {site} outside 1..={n}")));
    }
    let single = match axis {
        Axis::X => pauli::sigma_x(),
        Axis::Y => pauli::sigma_y(),
        Axis::Z => pauli::sigma_z(),
    };
    let id = pauli::identity();
    let mut out = if site == 1 { single.clone() } else { id.clone() };
    for k in 2..=n {
        out = kron(&out, if k == site { &single } else { &id })?;
    }
    Ok(out)
}

/// `Σ_i σ^z_i` as a dense diagonal matrix.
pub fn total_sz(n: usize) -> ComplexMatrix {
    let diag: Vec<f64> = (0..1usize << n)
        .map(|b| n as f64 - 2.0 * b.count_ones() as f64)
        .collect();
    ComplexMatrix::from_diag(&diag)
}

/// Basis indices grouped by number of down spins, from all-up to all-down.
pub fn magnetization_sectors(n: usize) -> Vec<Vec<usize>> {
    let mut sectors = vec![Vec::new(); n + 1];
    for b in 0..1usize << n {
        sectors[b.count_ones() as usize].push(b);
    }
    sectors
}

/// Map a ferromagnetic XXZ spec (`j < 0`) to the unitarily equivalent
/// antiferromagnetic one by a π rotation about z on odd sites:
/// `j → |j|` and the anisotropy sign flips. Specs with `j ≥ 0` are returned
/// unchanged.
///
/// Only open chains are accepted: the rotation needs a bipartite lattice,
/// which a periodic ring with an odd number of sites is not.
pub fn ferro_to_af_map(spec: &ModelSpec) -> Result<ModelSpec> {
    if spec.kind != ModelKind::XxzDm {
        return Err(Error::contract("the ferro/antiferro map applies to xxz-dm only"));
    }
    if spec.boundary != Boundary::Open {
        return Err(Error::contract("the ferro/antiferro map is only provided for open chains"));
    }
    let mut out = spec.clone();
    if spec.j < 0.0 {
        out.j = spec.j.abs();
        out.delta_sign = spec.delta_sign.flipped();
    }
    Ok(out)
}

/// `⊗_{odd sites} σ^z`, the unitary behind [`ferro_to_af_map`].
pub fn odd_site_rotation(n: usize) -> ComplexMatrix {
    let diag: Vec<f64> = (0..1usize << n)
        .map(|b| {
            let flips = (1..=n)
                .step_by(2)
                .filter(|&s| b & (1usize << (n - s)) != 0)
                .count();
            if flips % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    ComplexMatrix::from_diag(&diag)
}

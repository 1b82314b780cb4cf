use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use rydgate::config::{OutputFormat, RunConfig};
use rydgate::constants::{mhz_to_rad_per_us, rad_per_us_to_mhz};
use rydgate::dressing::{dress as dress_states, effective_rabi, solve_zero_polarizability, Branch, DEFAULT_BRACKET};
use rydgate::dynamics::{dynamic_gate_phases, evolve as run_evolution, loss_probability, phonon_excitation, Level};
use rydgate::franck_condon::{fc_matrix, FcMethod};
use rydgate::gate::{cz_fidelity, entangling_phase, optimize_pulse, phase_trace, PulseShape};
use rydgate::interactions::{dd_shift, pair_potential_full, vdw_shift};
use rydgate::phonons::{build_hessian, diagonalize, Axis};
use rydgate::trap::{equilibrium_geometry, TrapConfig};
use rydgate::Error;

use crate::output::{num, write_json, Cell, Table};
use crate::{AxisArg, DressArgs, EvolveArgs, FcArgs, GateArgs, InteractionsArgs, ModesArgs};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(PathBuf, std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(_) => 3,
            CliError::Io(..) => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Output is buffered and only written once the command has succeeded, so a
/// failing run never leaves a truncated file behind.
pub struct Sink {
    path: Option<PathBuf>,
    buf: Vec<u8>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Self> {
        Ok(Self { path: path.map(Path::to_path_buf), buf: Vec::new() })
    }

    pub fn finish(self) -> Result<()> {
        match &self.path {
            Some(p) => std::fs::write(p, &self.buf).map_err(|e| CliError::Io(p.clone(), e)),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(&self.buf).and_then(|()| out.flush()).map_err(|e| CliError::Io("<stdout>".into(), e))
            }
        }
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io("<buffer>".into(), e)
}

fn emit_table(t: &Table, format: OutputFormat, sink: &mut Sink) -> Result<()> {
    t.write(format, &mut sink.buf).map_err(io_err)
}

fn emit_json(v: &Value, sink: &mut Sink) -> Result<()> {
    write_json(v, &mut sink.buf).map_err(io_err)
}

fn validated(cfg: RunConfig) -> Result<RunConfig> {
    cfg.validate()?;
    Ok(cfg)
}

fn axes(a: AxisArg) -> Vec<Axis> {
    match a {
        AxisArg::X => vec![Axis::X],
        AxisArg::Y => vec![Axis::Y],
        AxisArg::Z => vec![Axis::Z],
        AxisArg::All => Axis::ALL.to_vec(),
    }
}

fn trap_and_geometry(cfg: &RunConfig) -> Result<(TrapConfig, rydgate::trap::CrystalGeometry)> {
    let mut trap = cfg.trap_config();
    if let Some(f) = cfg.trap.omega_z_mhz_override {
        trap = trap.with_axial_frequency(TAU * f * 1e6);
    }
    let geom = equilibrium_geometry(&trap)?;
    Ok((trap, geom))
}

pub fn modes(cfg: &RunConfig, a: &ModesArgs, format: OutputFormat, sink: &mut Sink) -> Result<()> {
    let (trap, geom) = trap_and_geometry(cfg)?;
    let mut t = Table::new(["axis", "mode", "omega_mhz", "ion1", "ion2"]);
    for axis in axes(a.axis) {
        let basis = diagonalize(&build_hessian(axis, &trap, &geom, [a.pol1, a.pol2])?)?;
        for j in 0..2 {
            let v = basis.mode(j);
            t.push(vec![
                axis.label().into(),
                j.into(),
                rad_per_us_to_mhz(basis.frequencies[j]).into(),
                v[0].into(),
                v[1].into(),
            ]);
        }
    }
    emit_table(&t, format, sink)
}

pub fn fc(cfg: &RunConfig, a: &FcArgs, format: OutputFormat, sink: &mut Sink) -> Result<()> {
    let axis = match a.axis {
        AxisArg::X => Axis::X,
        AxisArg::Y => Axis::Y,
        AxisArg::Z => Axis::Z,
        AxisArg::All => {
            return Err(Error::InvalidArgument("fc needs a single axis".into()).into());
        }
    };
    let (trap, geom) = trap_and_geometry(cfg)?;
    let ground = diagonalize(&build_hessian(axis, &trap, &geom, [0.0, 0.0])?)?;
    let excited = diagonalize(&build_hessian(axis, &trap, &geom, [a.pol1, a.pol2])?)?;
    let k = fc_matrix(&ground, &excited, a.n_max)?;
    if let Some(w) = &k.warning {
        eprintln!("warning: {w}");
    }
    if let FcMethod::Quadrature { order } = k.method {
        eprintln!("note: mode axes rotate; overlaps from {order}-point Gauss-Hermite quadrature");
    }
    let label = |i: usize| {
        let (k0, k1) = k.multi_index(i);
        format!("{k0}_{k1}")
    };
    let mut t = Table::new(std::iter::once("excited\\ground".to_string()).chain((0..k.dim()).map(label)));
    for i in 0..k.dim() {
        let mut row: Vec<Cell> = vec![label(i).into()];
        row.extend(k.entries.row(i).iter().map(|&x| Cell::Num(x)));
        t.push(row);
    }
    emit_table(&t, format, sink)
}

pub fn dress(cfg: &RunConfig, a: &DressArgs, sink: &mut Sink) -> Result<()> {
    let mut cfg = cfg.clone();
    let d = &mut cfg.dressing;
    d.omega_mw_mhz = a.omega_mw_mhz.unwrap_or(d.omega_mw_mhz);
    d.delta_s_mhz = a.delta_s_mhz.unwrap_or(d.delta_s_mhz);
    d.delta_p_mhz = a.delta_p_mhz.unwrap_or(d.delta_p_mhz);
    let cfg = validated(cfg)?;
    let drive = cfg.mw_drive()?;
    let pair = dress_states(&drive, cfg.dressing.pol_p, cfg.dressing.pol_s);
    let model = cfg.interaction_model()?;
    let mut v = json!({
        "omega_mw_mhz": num(cfg.dressing.omega_mw_mhz),
        "delta_s_mhz": num(cfg.dressing.delta_s_mhz),
        "delta_p_mhz": num(cfg.dressing.delta_p_mhz),
        "c_plus": num(pair.c_plus),
        "c_minus": num(pair.c_minus),
        "n_plus": num(pair.n_plus),
        "n_minus": num(pair.n_minus),
        "e_plus_mhz": num(rad_per_us_to_mhz(pair.e_plus)),
        "e_minus_mhz": num(rad_per_us_to_mhz(pair.e_minus)),
        "pol_plus": num(pair.pol_plus),
        "pol_minus": num(pair.pol_minus),
        "c3_minus_mhz_um3": num(rad_per_us_to_mhz(model.c3_minus)),
        "c3_plus_mhz_um3": num(rad_per_us_to_mhz(model.c3_plus)),
        "rabi_reduction": num(effective_rabi(&drive, 1.0)),
    });
    if a.solve_zero {
        let dm = solve_zero_polarizability(
            cfg.dressing.pol_p,
            cfg.dressing.pol_s,
            drive.omega_mw_rabi,
            Branch::Minus,
            DEFAULT_BRACKET,
        )?;
        v["zero_pol_delta_minus_mhz"] = num(rad_per_us_to_mhz(dm));
    }
    emit_json(&v, sink)
}

pub fn interactions(cfg: &RunConfig, a: &InteractionsArgs, format: OutputFormat, sink: &mut Sink) -> Result<()> {
    if !(a.r_min > 0.0 && a.r_max > a.r_min) {
        return Err(Error::InvalidArgument(format!("need 0 < r-min < r-max, got {} and {}", a.r_min, a.r_max)).into());
    }
    if a.points < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()).into());
    }
    let drive = cfg.mw_drive()?;
    let model = cfg.interaction_model()?;
    let mut t = Table::new([
        "R0_um",
        "vdw_mhz",
        "dd_minus_mhz",
        "full_branch_1_mhz",
        "full_branch_2_mhz",
        "full_branch_3_mhz",
        "full_branch_4_mhz",
    ]);
    let mut weakest = None;
    for i in 0..a.points {
        let r = a.r_min + (a.r_max - a.r_min) * i as f64 / (a.points - 1) as f64;
        let full = pair_potential_full(&drive, cfg.dressing.d1, r);
        if let Some(w) = full.warning {
            weakest.get_or_insert((r, w));
        }
        let mut row: Vec<Cell> = vec![
            r.into(),
            rad_per_us_to_mhz(vdw_shift(model.c6, r)).into(),
            rad_per_us_to_mhz(dd_shift(model.c3_minus, r)).into(),
        ];
        row.extend(full.shifts().iter().map(|&s| Cell::Num(rad_per_us_to_mhz(s))));
        t.push(row);
    }
    if let Some((r, w)) = weakest {
        eprintln!("warning: at R0 = {r} um: {w}");
    }
    emit_table(&t, format, sink)
}

fn gate_inputs(cfg: &RunConfig, a: &GateArgs) -> Result<RunConfig> {
    let mut cfg = cfg.clone();
    let p = &mut cfg.pulse;
    p.omega0_mhz = a.omega0_mhz.unwrap_or(p.omega0_mhz);
    p.delta0_mhz = a.delta0_mhz.unwrap_or(p.delta0_mhz);
    p.tau_us = a.tau_us.unwrap_or(p.tau_us);
    if a.blockade_mhz.is_some() {
        cfg.simulation.blockade_mhz = a.blockade_mhz;
    }
    validated(cfg)
}

pub fn gate(cfg: &RunConfig, a: &GateArgs, format: OutputFormat, sink: &mut Sink) -> Result<()> {
    let cfg = gate_inputs(cfg, a)?;
    let blockade = cfg.blockade()?;
    let mut pulse = cfg.pulse()?;
    if a.optimize {
        let bracket = (mhz_to_rad_per_us(a.bracket_lo_mhz), mhz_to_rad_per_us(a.bracket_hi_mhz));
        let delta0 = optimize_pulse(pulse.omega0, pulse.tau, blockade, PI, bracket)?;
        pulse = PulseShape::new(pulse.omega0, delta0, pulse.tau)?;
    }
    if a.trace {
        let mut t = Table::new(["t_us", "phi_DD", "phi_DE", "phi_ent"]);
        for s in phase_trace(&pulse, blockade, a.points)? {
            t.push(vec![s.t.into(), s.phi_dd.into(), s.phi_de.into(), s.phi_ent.into()]);
        }
        return emit_table(&t, format, sink);
    }
    let g = entangling_phase(&pulse, blockade)?;
    let diag = g.unitary.diagonal();
    let r = g.adiabaticity;
    let v = json!({
        "omega0_mhz": num(rad_per_us_to_mhz(pulse.omega0)),
        "delta0_mhz": num(rad_per_us_to_mhz(pulse.delta0)),
        "tau_us": num(pulse.tau),
        "blockade_mhz": num(rad_per_us_to_mhz(blockade)),
        "optimized": a.optimize,
        "phi_dd": num(g.phi_dd),
        "phi_de": num(g.phi_de),
        "phi_ent": num(g.phi_ent),
        "phi_ent_unwrapped": num(g.phi_ent_raw),
        "unitary_phases": diag.iter().map(|z| num(z.arg())).collect::<Vec<_>>(),
        "cz_fidelity": num(cz_fidelity(&g.unitary)),
        "adiabaticity": {
            "min_gap_mhz": num(rad_per_us_to_mhz(r.min_gap)),
            "slew_scale_mhz": num(rad_per_us_to_mhz(r.slew_scale)),
            "ratio": num(r.ratio),
            "multiple": num(r.multiple),
            "satisfied": r.satisfied,
        },
    });
    emit_json(&v, sink)
}

pub fn evolve(cfg: &RunConfig, a: &EvolveArgs, format: OutputFormat, sink: &mut Sink) -> Result<()> {
    let sim = cfg.sim_config()?;
    let trace = run_evolution(&sim, &sim.basis_state(Level::D, Level::D, 0))?;
    let mut t = Table::new(["t_us", "p_DD", "p_Dm", "p_mm", "p_init", "mean_phonon", "norm"]);
    for (time, p) in trace.times.iter().zip(&trace.populations) {
        t.push(vec![
            (*time).into(),
            p.p_dd.into(),
            p.p_dm.into(),
            p.p_mm.into(),
            p.p_init.into(),
            p.mean_phonon.into(),
            p.norm.into(),
        ]);
    }
    emit_table(&t, format, sink)?;

    let phases = dynamic_gate_phases(&sim)?;
    let adiabatic = entangling_phase(&sim.pulse, sim.blockade)?;
    let loss = loss_probability(&trace, cfg.simulation.tau0_us)?;
    let summary = json!({
        "phi_ent_dynamic": num(phases.phi_ent),
        "phi_ent_adiabatic": num(adiabatic.phi_ent),
        "P_loss": num(loss),
        "max_p_mm": num(trace.populations.iter().map(|p| p.p_mm).fold(0.0, f64::max)),
        "max_phonon_deviation": num(phonon_excitation(&trace).max_deviation),
        "max_norm_drift": num(trace.max_norm_drift()),
        "blockade_mhz": num(rad_per_us_to_mhz(sim.blockade)),
        "omega_z_mhz": num(rad_per_us_to_mhz(sim.omega_z)),
        "eta": num(sim.eta),
        "n_phonon_max": sim.n_phonon_max,
        "tau0_us": num(cfg.simulation.tau0_us),
    });
    let mut buf = Vec::new();
    write_json(&summary, &mut buf).map_err(io_err)?;
    match &a.summary {
        Some(p) => std::fs::write(p, &buf).map_err(|e| CliError::Io(p.clone(), e)),
        None => std::io::stderr().write_all(&buf).map_err(|e| CliError::Io("<stderr>".into(), e)),
    }
}

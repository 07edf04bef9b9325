use std::io::Write;
use std::path::Path;

use numschubert::geometry::incidence_residuals;
use numschubert::homotopy::change_flags;
use numschubert::{
    solve_schubert_problem, solve_via_known_instance, RandomSource, SchubertError, SchubertInstance, SolveOptions,
    SolveReport,
};

use crate::format::{
    has_instance, matrix_to_json, read_instance, read_json, to_json_string, InstanceFile, Metadata, PathCounts, ProblemFile,
    SolutionFile, TimingsJson,
};
use crate::{Cli, CliError, Command, EXIT_INCOMPLETE, EXIT_OK, EXIT_VERIFY_FAILED};

/// Runs one command and returns the process exit code. Diagnostics go to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if let Some(t) = cli.threads {
        // Fails only if a pool already exists in this process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Count { problem } => count(problem, out),
        Command::Solve { input } => solve(cli, input, out, err),
        Command::Verify { instance, solutions } => verify(cli, instance, solutions, out),
        Command::ChangeFlags { solutions, target } => change(cli, solutions, target, out, err),
        Command::Instance { problem } => instance(cli, problem, out, err),
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn emit(cli: &Cli, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => out.write_all(text.as_bytes()).map_err(io_err),
    }
}

fn resolve_seed(cli: &Cli, err: &mut dyn Write) -> Result<u64, CliError> {
    let seed = cli.seed.unwrap_or_else(rand::random);
    writeln!(err, "seed: {seed}").map_err(io_err)?;
    Ok(seed)
}

fn numerical(e: SchubertError) -> CliError {
    match e {
        SchubertError::Linalg(_) | SchubertError::Underdetermined { .. } | SchubertError::ConstantEquation(_) => {
            CliError::Numerical(e.to_string())
        }
        other => CliError::Schubert(other),
    }
}

fn count(path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let file: ProblemFile = read_json(path)?;
    let problem = file.to_problem()?;
    writeln!(out, "{}", problem.lr_number()).map_err(io_err)?;
    writeln!(out, "{}", problem.lr_rule()).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn instance(cli: &Cli, path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let problem = read_json::<ProblemFile>(path)?.to_problem()?;
    let seed = resolve_seed(cli, err)?;
    let inst = SchubertInstance::random(&problem, &mut RandomSource::new(seed)).map_err(numerical)?;
    emit(cli, &to_json_string(&InstanceFile::from_instance(&inst, Some(seed))), out)?;
    Ok(EXIT_OK)
}

fn report_metadata(report: &SolveReport, seed: u64) -> Metadata {
    Metadata {
        seed: Some(seed),
        version: env!("CARGO_PKG_VERSION").to_string(),
        expected: Some(report.expected),
        complete: Some(!report.incomplete),
        seed_method: Some(report.seed_method.to_string()),
        monodromy_loops: Some(report.monodromy_loops),
        paths: Some(PathCounts {
            tracked: report.path_stats.tracked,
            succeeded: report.path_stats.succeeded,
            diverged: report.path_stats.diverged,
            failed: report.path_stats.failed,
        }),
        failures: report.failures.clone(),
        timings: Some(TimingsJson {
            seeding: report.timings.seeding.as_secs_f64(),
            completion: report.timings.completion.as_secs_f64(),
            total: report.timings.total.as_secs_f64(),
        }),
    }
}

fn solve(cli: &Cli, path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let opts = SolveOptions::default().with_verify_tol(cli.tol);
    let (inst, inst_seed, report, seed) = if has_instance(path)? {
        let inst = read_instance(path)?;
        let parsed = inst.to_instance()?;
        let seed = resolve_seed(cli, err)?;
        let mut rng = RandomSource::new(seed);
        let report =
            solve_via_known_instance(parsed.problem(), parsed.flags(), &mut rng, &opts).map_err(numerical)?;
        (parsed, inst.seed, report, seed)
    } else {
        let problem = read_json::<ProblemFile>(path)?.to_problem()?;
        let seed = resolve_seed(cli, err)?;
        let mut rng = RandomSource::new(seed);
        let inst = SchubertInstance::random(&problem, &mut rng).map_err(numerical)?;
        let report = solve_schubert_problem(&inst, &mut rng, &opts).map_err(numerical)?;
        (inst, Some(seed), report, seed)
    };
    let file = SolutionFile {
        instance: InstanceFile::from_instance(&inst, inst_seed),
        solutions: report.solutions.iter().map(matrix_to_json).collect(),
        residuals: report.residuals.clone(),
        metadata: report_metadata(&report, seed),
    };
    emit(cli, &to_json_string(&file), out)?;
    writeln!(err, "found {} of {} solutions", report.count, report.expected).map_err(io_err)?;
    for f in &report.failures {
        writeln!(err, "  {f}").map_err(io_err)?;
    }
    Ok(if report.incomplete { EXIT_INCOMPLETE } else { EXIT_OK })
}

fn verify(cli: &Cli, inst_path: &Path, sol_path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let inst = read_instance(inst_path)?.to_instance()?;
    let sols = read_json::<SolutionFile>(sol_path)?.matrices(inst.k(), inst.n())?;
    let mut text = String::from("index\tresidual\tstatus\n");
    let mut all_pass = true;
    for (i, h) in sols.iter().enumerate() {
        let r = incidence_residuals(h, &inst)?.max_residual();
        let pass = r <= cli.tol;
        all_pass &= pass;
        text.push_str(&format!("{i}\t{r:.3e}\t{}\n", if pass { "PASS" } else { "FAIL" }));
    }
    emit(cli, &text, out)?;
    Ok(if all_pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn change(
    cli: &Cli,
    sol_path: &Path,
    target_path: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let source = read_json::<SolutionFile>(sol_path)?;
    let from = source.instance.to_instance()?;
    let target_file = read_instance(target_path)?;
    let to = target_file.to_instance()?;
    if from.problem() != to.problem() {
        return Err(CliError::Input(
            "target instance is for a different problem (conditions must match in order)".into(),
        ));
    }
    let sols = source.matrices(from.k(), from.n())?;
    for (i, h) in sols.iter().enumerate() {
        let r = incidence_residuals(h, &from)?.max_residual();
        if !(r <= cli.tol) {
            return Err(CliError::Input(format!(
                "solution {i} does not satisfy its own instance (residual {r:.3e})"
            )));
        }
    }
    let seed = resolve_seed(cli, err)?;
    let mut rng = RandomSource::new(seed);
    let opts = SolveOptions::default();
    let moved = change_flags(from.problem(), &sols, from.flags(), to.flags(), &mut rng, opts.tracker(), cli.tol)
        .map_err(numerical)?;

    let mut solutions = Vec::new();
    let mut residuals = Vec::new();
    let mut failures = Vec::new();
    for (i, r) in moved.into_iter().enumerate() {
        match r {
            Ok(h) => {
                residuals.push(incidence_residuals(&h, &to)?.max_residual());
                solutions.push(matrix_to_json(&h));
            }
            Err(e) => failures.push(format!("solution {i}: {e}")),
        }
    }
    let complete = failures.is_empty();
    for f in &failures {
        writeln!(err, "  {f}").map_err(io_err)?;
    }
    let file = SolutionFile {
        instance: target_file.clone(),
        solutions,
        residuals,
        metadata: Metadata {
            seed: Some(seed),
            version: env!("CARGO_PKG_VERSION").to_string(),
            expected: Some(to.problem().lr_number()),
            complete: Some(complete),
            paths: Some(PathCounts {
                tracked: sols.len(),
                succeeded: sols.len() - failures.len(),
                diverged: 0,
                failed: failures.len(),
            }),
            failures,
            ..Metadata::default()
        },
    };
    emit(cli, &to_json_string(&file), out)?;
    Ok(if complete { EXIT_OK } else { EXIT_INCOMPLETE })
}

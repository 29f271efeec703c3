//! Drive the batch scenarios from an in-memory config, as the CLI does.

use qfric::scenarios::{run, RunConfig, Scenario};

fn main() -> qfric::Result<()> {
    let cfg = RunConfig::parse(
        "temperature = 0.01\nspeed = 0.01\n[model_a]\ntransition = 1.0, 0.01, 1.0\ntransition = 3.0, 0.05, 0.2\n[lambda_table]\nthetas = 0, 0.01\n",
        None,
    )?;
    for s in [Scenario::LambdaTable, Scenario::Validate] {
        let (table, ok) = run(s, &cfg)?;
        println!("{s:?}: {} rows, all checks pass: {ok}", table.rows.len());
        print!("{}", table.to_csv_string()?);
    }
    Ok(())
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lexgames::graph::{parse_graph, write_graph};
use lexgames::Machine;
use tempfile::TempDir;

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lexgames"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn run(args: &[&str]) -> Output {
    run_in(Path::new("."), args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn member_verdicts() {
    let o = run(&["member", "MaxParity(3)", "| 1 2"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "rejected witness=2\n"));
    let o = run(&["member", "minlex{0:TW@0,1:TL@1}", "| 0"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "accepted witness=0\n"));
    assert_eq!(code(&run(&["member", "MaxParity(3)", "| 1 x"])), 3);
    assert_eq!(code(&run(&["member", "Parity(3)", "| 1"])), 3);
}

#[test]
fn built_graphs_round_trip() {
    let sig = stdout(&run(&[
        "build",
        "signature",
        "--alpha",
        "2",
        "--kappa",
        "2",
    ]));
    let g = parse_graph(&sig).unwrap();
    assert_eq!(g.len(), 4);
    assert_eq!(write_graph(&g), sig);

    let chain = stdout(&run(&["build", "chain", "--class", "1", "--k", "3"]));
    assert_eq!(parse_graph(&chain).unwrap().len(), 3);
}

#[test]
fn build_errors() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        dir.path(),
        &["build", "signature", "--alpha", "30", "--kappa", "3"],
    );
    assert_eq!(code(&o), 2);
    let o = run_in(
        dir.path(),
        &[
            "--vertex-budget",
            "10",
            "build",
            "chain",
            "--class",
            "0",
            "--k",
            "11",
        ],
    );
    assert_eq!(code(&o), 2);

    // b sits below a but only b has the loop
    fs::write(
        dir.path().join("bad.graph"),
        "vertex a key=1\nvertex b key=0\nedge b 1 b\n",
    )
    .unwrap();
    fs::write(
        dir.path().join("spec"),
        "level 0 loop\nlevel 1 file bad.graph\nbeta 2\n",
    )
    .unwrap();
    assert_eq!(
        code(&run_in(dir.path(), &["build", "power", "--spec", "spec"])),
        3
    );

    fs::write(
        dir.path().join("good"),
        "level 0 loop\nlevel 1 chain 2\nbeta 3\n",
    )
    .unwrap();
    let o = run_in(dir.path(), &["build", "power", "--spec", "good"]);
    assert_eq!(code(&o), 0);
    assert_eq!(parse_graph(&stdout(&o)).unwrap().len(), 17);
}

fn build_parity_product(dir: &Path) {
    for args in [
        &["build", "loop", "--class", "0", "-o", "l0"][..],
        &["build", "chain", "--class", "1", "--k", "3", "-o", "c1"],
        &["build", "loop", "--class", "2", "-o", "l2"],
        &["build", "lexprod", "l0", "c1", "-o", "a"],
        &["build", "lexprod", "a", "l2", "-o", "b"],
        &["build", "wrap", "b", "--k", "2", "-o", "u"],
    ] {
        assert_eq!(code(&run_in(dir, args)), 0, "{args:?}");
    }
}

#[test]
fn parity_product_is_universal() {
    let dir = TempDir::new().unwrap();
    build_parity_product(dir.path());
    let o = run_in(
        dir.path(),
        &[
            "check",
            "universality",
            "--universal",
            "u",
            "--objective",
            "Parity(2)",
            "--colours",
            "0,1,2",
            "--size",
            "2",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("checked 4096 graphs"));
}

#[test]
fn universality_failures_are_written() {
    let dir = TempDir::new().unwrap();
    build_parity_product(dir.path());
    // the unwrapped product misses graphs that need two copies
    let o = run_in(
        dir.path(),
        &[
            "check",
            "universality",
            "--universal",
            "l0",
            "--objective",
            "Parity(2)",
            "--colours",
            "0,1,2",
            "--size",
            "2",
            "--failures",
            "out",
        ],
    );
    assert_eq!(code(&o), 1);
    let written: Vec<_> = fs::read_dir(dir.path().join("out")).unwrap().collect();
    assert!(!written.is_empty());
    for f in written {
        let text = fs::read_to_string(f.unwrap().path()).unwrap();
        assert!(parse_graph(&text).is_ok());
    }
    let o = run_in(
        dir.path(),
        &[
            "--enumeration-budget",
            "100",
            "check",
            "universality",
            "--universal",
            "u",
            "--objective",
            "Parity(2)",
            "--colours",
            "0,1,2",
            "--size",
            "2",
        ],
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn satisfaction_checks() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("g"),
        "vertex a\nvertex b\nedge a 1 b\nedge b 2 a\n",
    )
    .unwrap();
    let exact = run_in(
        dir.path(),
        &[
            "check",
            "satisfies",
            "--graph",
            "g",
            "--objective",
            "MaxParity(3)",
        ],
    );
    assert_eq!(code(&exact), 1);
    assert!(stdout(&exact).contains("violated"));
    let bounded = run_in(
        dir.path(),
        &[
            "check",
            "satisfies",
            "--graph",
            "g",
            "--objective",
            "MaxParity(3)",
            "--bound",
            "2",
        ],
    );
    assert_eq!(code(&bounded), 1);
    fs::write(
        dir.path().join("h"),
        "vertex a\nvertex b\nedge a 1 b\nedge b 0 a\n",
    )
    .unwrap();
    let odd = run_in(
        dir.path(),
        &[
            "check",
            "satisfies",
            "--graph",
            "h",
            "--objective",
            "MaxParity(3)",
        ],
    );
    assert_eq!(code(&odd), 0);
}

#[test]
fn auto_solver_matches_oracle_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    for w in ["MaxParity(3)", "MinParity(3)", "Parity(2)", "omegaBuchi(3)"] {
        for seed in 0..8 {
            let seed = seed.to_string();
            let game = run_in(
                dir.path(),
                &["--seed", &seed, "gen", "game", "--objective", w],
            );
            assert_eq!(code(&game), 0);
            assert_eq!(
                stdout(&game),
                stdout(&run_in(
                    dir.path(),
                    &["--seed", &seed, "gen", "game", "--objective", w]
                ))
            );
            fs::write(dir.path().join("game"), game.stdout).unwrap();
            let args = [
                "solve",
                "--game",
                "game",
                "--objective",
                w,
                "--auto",
                "--oracle",
            ];
            let o = run_in(dir.path(), &args);
            assert_eq!(code(&o), 0, "{w} seed {seed}: {}", stdout(&o));
            assert!(stdout(&o).contains("oracle: agrees"));
            assert_eq!(stdout(&o), stdout(&run_in(dir.path(), &args)));
        }
    }
}

#[test]
fn unsuitable_universal_graph_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("game"),
        "vertex x\nowner x eve\nedge x 0 x\n",
    )
    .unwrap();
    // not totally ordered
    fs::write(dir.path().join("u"), "vertex a\nvertex b\nedge a 0 a\n").unwrap();
    let o = run_in(
        dir.path(),
        &[
            "solve",
            "--game",
            "game",
            "--objective",
            "MaxParity(2)",
            "--universal",
            "u",
        ],
    );
    assert_eq!(code(&o), 3);
}

#[test]
fn reductions_emit_parsable_artifacts() {
    let dir = TempDir::new().unwrap();
    let last_one = "colours 0 1\nstate p out=1\nstate q out=2\ninit p\ntrans p 0 p\ntrans p 1 q\ntrans q 0 p\ntrans q 1 q\n";
    fs::write(dir.path().join("f"), last_one).unwrap();
    fs::write(
        dir.path().join("c"),
        "colours 0 1\nstate p out=2\ninit p\ntrans p 0 p\ntrans p 1 p\n",
    )
    .unwrap();
    for args in [
        &["reduce", "union", "-f", "c", "-g", "f"][..],
        &["reduce", "max", "-f", "c", "-g", "f"],
        &["reduce", "chain", "c", "f"],
        &[
            "reduce", "step", "--small", "c", "--big", "f", "--next", "f",
        ],
    ] {
        let o = run_in(dir.path(), args);
        assert_eq!(code(&o), 0, "{args:?}");
        let m = Machine::parse(&stdout(&o)).unwrap();
        assert_eq!(m.to_string(), stdout(&o));
    }
    assert_eq!(code(&run_in(dir.path(), &["reduce", "chain", "f", "c"])), 3);
    let o = run_in(
        dir.path(),
        &["reduce", "image", "-f", "f", "--word", "0 | 1 0"],
    );
    assert_eq!(stdout(&o), "0:1 | 0:1 0:2\n");
    assert_eq!(
        stdout(&run(&["reduce", "double", "--word", "0 | 1 2"])),
        "0 | 2 4\n"
    );
    let o = run(&["reduce", "collapse", "--word", "w 1 | 0", "--alpha", "w"]);
    assert_eq!(stdout(&o), "0 1 | 0\n");
    assert_eq!(
        code(&run(&[
            "reduce", "collapse", "--word", "| w", "--alpha", "w"
        ])),
        3
    );
}

#[test]
fn json_reports() {
    let o = run(&["--format", "json", "member", "MaxParity(3)", "| 1 2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["accepted"], false);
    assert_eq!(v["witness_index"], "2");
    let o = run(&["--format", "json", "member", "MaxParity(3)", "| x"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((code(&o), v["exit_code"].as_i64()), (3, Some(3)));
    assert!(v["error"].is_string());
}

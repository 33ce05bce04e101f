use std::io::{BufRead, BufReader};
use std::process::{Command, Output, Stdio};

fn cmnim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmnim"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = cmnim(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

#[test]
fn solve_prints_class_and_winning_move() {
    let out = ok(&["solve", "--game", "cookie_monster", "--position", "1,7,9"]);
    assert_eq!(out, "N\nwinning move: ({2,3},7) -> (1,0,2)\n");
    assert_eq!(
        ok(&["solve", "--game", "cookie_monster", "--position", "1,1,4"]),
        "P\n"
    );
    assert_eq!(
        ok(&["solve", "--game", "nim", "--position", "1,1", "--misere"])
            .lines()
            .next(),
        Some("N")
    );
    assert_eq!(
        ok(&[
            "solve",
            "--game",
            "preset:marienbad",
            "--position",
            "1,3,5,7",
            "--misere"
        ]),
        "P\n"
    );
}

#[test]
fn grundy_and_complete() {
    assert_eq!(
        ok(&["grundy", "--game", "wythoff", "--position", "3,3"]),
        "6\n"
    );
    assert_eq!(
        ok(&["complete", "--game", "wythoff", "--prefix", "6", "--index", "2"]),
        "10\n"
    );
    assert_eq!(
        ok(&["complete", "--game", "nim", "--prefix", "1,7", "--index", "3"]),
        "6\n"
    );
    assert_ne!(
        ok(&[
            "complete",
            "--game",
            "cookie_monster",
            "--prefix",
            "1,7",
            "--index",
            "3"
        ]),
        "9\n"
    );
}

#[test]
fn conversions() {
    assert_eq!(ok(&["convert", "--miles", "6"]), "10\n");
    assert_eq!(ok(&["convert", "--km", "10"]), "6\n");
    assert_eq!(ok(&["convert", "--miles", "100"]), "162\n");
    assert_eq!(cmnim(&["convert"]).status.code(), Some(2));
    assert_eq!(
        cmnim(&["convert", "--miles", "1", "--km", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn cm_number_with_witness() {
    assert_eq!(ok(&["cm-number", "1,2,4"]), "3\n");
    let out = ok(&["cm-number", "1,2,3", "--witness"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "2");
    assert!(lines.last().unwrap().ends_with("(0,0,0)"));
    assert_eq!(ok(&["cm-number", "1,2,3,5,8", "--restricted"]), "3\n");
}

#[test]
fn table_output_round_trips_through_verify() {
    let out = ok(&[
        "table",
        "--game",
        "cookie_monster",
        "--max",
        "9",
        "--p-only",
        "--normalize",
        "sorted",
        "--nonempty",
    ]);
    assert_eq!(out.lines().filter(|l| l.contains(',')).count(), 10);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cm3.txt");
    std::fs::write(&path, &out).unwrap();
    let v = cmnim(&["verify", "--table", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));

    // a listed N-position fails the check with exit status 1
    std::fs::write(&path, format!("{out}1,7,9\n")).unwrap();
    let v = cmnim(&["verify", "--table", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).contains("(1,7,9)"));
}

#[test]
fn table_formats() {
    let csv = ok(&[
        "table", "--game", "wythoff", "--max", "1", "--format", "csv",
    ]);
    assert_eq!(csv, "jar1,jar2,grundy\n0,0,0\n0,1,1\n1,0,1\n1,1,2\n");
    let text = ok(&[
        "table", "--game", "nim", "--jars", "2", "--max", "2", "--p-only",
    ]);
    assert!(text.ends_with("max: 2\n0,0\n1,1\n2,2\n"), "{text}");
    assert_eq!(
        cmnim(&["table", "--game", "nim", "--max", "2", "--misere"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn custom_rules_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rules.json");
    std::fs::write(
        &path,
        r#"{"jars": 2, "permissible_sets": [[1], [2], [1, 2]]}"#,
    )
    .unwrap();
    let out = ok(&[
        "solve",
        "--rules",
        path.to_str().unwrap(),
        "--position",
        "3,5",
    ]);
    assert_eq!(out, "P\n");
    std::fs::write(&path, r#"{"jars": 2, "permissible_sets": [[3]]}"#).unwrap();
    assert_eq!(
        cmnim(&[
            "solve",
            "--rules",
            path.to_str().unwrap(),
            "--position",
            "3,5"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn exit_codes() {
    assert_eq!(
        cmnim(&["solve", "--game", "nope", "--position", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cmnim(&["solve", "--game", "wythoff", "--position", "1,2,3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cmnim(&["solve", "--game", "nim", "--position", "1,x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cmnim(&["solve", "--position", "1"]).status.code(), Some(2));
    assert_eq!(cmnim(&["frobnicate"]).status.code(), Some(2));
    let o = cmnim(&[
        "solve",
        "--game",
        "cookie_monster",
        "--position",
        "900,900,900",
        "--max-entries",
        "1000",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource limit"));
    assert_eq!(
        cmnim(&["cm-number", "1,2,3,4,5,6,7"]).status.code(),
        Some(3)
    );
    assert_eq!(cmnim(&["verify", "--max", "5"]).status.code(), Some(2));
}

#[test]
fn verify_suite_passes() {
    let out = ok(&["verify", "--suite", "all", "--max", "9"]);
    assert!(out.lines().last().unwrap().ends_with(", 0 failed"));
    let json = ok(&["verify", "--suite", "golden", "--json"]);
    for line in json.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["status"], "pass");
    }
}

#[test]
fn serve_answers_http() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cmnim"))
        .args(["serve", "--port", "0"])
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stderr.take().unwrap())
        .read_line(&mut line)
        .unwrap();
    let addr = line.trim().rsplit("http://").next().unwrap().to_string();
    let mut stream = std::net::TcpStream::connect(&addr).unwrap();
    use std::io::{Read, Write};
    write!(
        stream,
        "GET /api/presets HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n"
    )
    .unwrap();
    let mut resp = String::new();
    stream.read_to_string(&mut resp).unwrap();
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(resp.starts_with("HTTP/1.1 200"), "{resp}");
    assert!(resp.contains("cookie_monster"));
}

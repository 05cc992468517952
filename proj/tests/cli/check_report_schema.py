"""Runs the CLI over the example configs and validates every report against the published schema."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def command_for(config: pathlib.Path) -> list[list[str]]:
    kind = json.loads(config.read_text())["kind"]
    if kind == "game":
        return [["game", "analyze"], ["game", "simulate", "--samples", "5000"]]
    if kind == "convolution":
        return [["convolve"]]
    return [["scenario"]]


def run(exe: str, args: list[str], out: pathlib.Path) -> bytes:
    result = subprocess.run([exe, *args, "--out", str(out), "--csv"], capture_output=True, text=True)
    if result.returncode != 0:
        raise SystemExit(f"{' '.join(args)} exited {result.returncode}: {result.stderr}")
    return (out / "report.json").read_bytes()


def main() -> int:
    exe, configs, schema_path = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    validator = jsonschema.Draft202012Validator(json.loads(schema_path.read_text()))
    jobs = [["verify", "--samples", "50"], ["verify", "--samples", "50", "--mode", "float"]]
    for config in sorted(configs.glob("*.json")):
        if config.name.startswith("invalid_"):
            continue
        own_mode = json.loads(config.read_text()).get("mode", "exact")
        for cmd in command_for(config):
            jobs.append([*cmd, "--config", str(config)])
            if own_mode != "float":
                jobs.append([*cmd, "--config", str(config), "--mode", "float"])
    checked = 0
    with tempfile.TemporaryDirectory() as tmp:
        for i, args in enumerate(jobs):
            first = run(exe, args, pathlib.Path(tmp) / f"{i}a")
            second = run(exe, args, pathlib.Path(tmp) / f"{i}b")
            if first != second:
                raise SystemExit(f"{' '.join(args)}: reports differ between identical runs")
            report = json.loads(first)
            errors = sorted(validator.iter_errors(report), key=lambda e: list(e.path))
            if errors:
                raise SystemExit(f"{' '.join(args)}: {errors[0].message} at {list(errors[0].path)}")
            checked += 1
    print(f"{checked} reports valid and reproducible")
    return 0


if __name__ == "__main__":
    sys.exit(main())

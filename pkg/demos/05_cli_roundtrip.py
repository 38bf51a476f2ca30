"""Drive the command line from Python: run an experiment, then report on it."""
import tempfile

from noiselab.cli import main

with tempfile.TemporaryDirectory() as out:
    code = main(["run", "--experiment", "lln_besov", "--Jmax", "10", "--trials", "20", "--out", out])
    print("run exit code:", code)

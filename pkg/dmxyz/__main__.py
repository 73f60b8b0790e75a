from dmxyz.cli import app

app(prog_name="dmxyz")

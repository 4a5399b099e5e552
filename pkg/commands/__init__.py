# Command modules; each exposes setup(cli)

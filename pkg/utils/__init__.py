# Utilities package for the workbench: settings and report helpers

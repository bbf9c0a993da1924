# Sparse VCH Control
# Sparse optimal control of the viscous Cahn-Hilliard system with logarithmic potential

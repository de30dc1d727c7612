# Finite connectivity space engine

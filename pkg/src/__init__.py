# Bound states of singular 1/|x| and 1/x^2 potentials

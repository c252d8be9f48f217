"""
Array geometry and free-space channels
======================================

Lay out the transmit UCA, the receive UCA 20 m away and a 4x4 RIS standing
beside the transmitter, then build the three channel matrices.
"""

import numpy as np

from oamswipt import PropagationParams, SystemGeometry, build_channels, element_layout

# default geometry: 8-element rings of radius 0.1 m, RIS centred at (0, -0.2, 0.4)
geom = SystemGeometry()
layout = element_layout(geom)

print("first Tx element:", layout.tx_positions[0])
print("first Rx element:", layout.rx_positions[0])
print("RIS normal:", layout.ris_frame.n_hat)
print("RIS corners:\n", layout.ris_positions[[0, geom.N_I_c - 1, -geom.N_I_c, -1]])

# every entry is beta * lambda / (4 pi r) * exp(-j 2 pi r / lambda)
ch = build_channels(layout, PropagationParams(beta=1.0, wavelength=0.05, K=1.0))
print("shapes  H_in", ch.H_in.shape, " H_ref", ch.H_ref.shape, " H_los", ch.H_los.shape)

# the direct link is weak at 20 m, while the RIS sits within half a metre of the Tx
print("|H_los| mean  %.3e" % np.abs(ch.H_los).mean())
print("|H_in|  mean  %.3e" % np.abs(ch.H_in).mean())
print("|H_ref| mean  %.3e" % np.abs(ch.H_ref).mean())

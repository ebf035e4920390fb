"""2-descent on elliptic curves with full rational 2-torsion."""

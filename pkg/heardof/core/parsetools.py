from fractions import Fraction

def rat_slug(value):
    """2/3 -> '2-3', for corpus ids and file names."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return '%d-%d' % (value.numerator, value.denominator)

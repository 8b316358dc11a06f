public double half(double value) {
    double ratio = 0.5;
    boolean ok = value > 0;
    return ok ? value * ratio : 0.0;
}

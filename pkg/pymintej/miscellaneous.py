import numpy as np
import matplotlib
import matplotlib.pyplot as plt
import matplotlib.gridspec as gridspec


def moving_average(values, window):
    '''
    Trailing moving average.

    :param values: sequence of samples

    :param window: number of samples averaged, must be positive

    :return: array of the same length as values, NaN until `window` samples are available
    '''
    if window < 1:
        raise RuntimeError('Moving average window must be positive, got %s' % window)
    vals = np.asarray(values, dtype=float)
    out = np.full(len(vals), np.nan)
    if len(vals) < window:
        return out
    kernel = np.ones(window) / window
    out[window - 1:] = np.convolve(vals, kernel, mode='valid')
    return out


def plot_benchmark(rows, outfile=None, title=None):
    '''
    Plot memory and CPU profiles sampled by bench_sample.

    :param rows: sequence of (timestamp, rss bytes, cpu %, rss moving average, cpu moving average);
        the moving averages may be None

    :param outfile: image file to write, the figure is shown when None

    :param title: optional title of the memory panel
    '''
    if len(rows) == 0:
        print('Error: No benchmark samples to plot')
        return
    data = np.array([[np.nan if v is None or v == '' else float(v) for v in row[:5]] for row in rows])
    t = data[:, 0] - data[0, 0]
    mb = 1024. * 1024.
    if outfile is not None:
        matplotlib.use('Agg')
    plt.clf()
    fig = plt.figure(figsize=(13, 10))
    gs0 = gridspec.GridSpec(2, 1)
    gs0.update(left=0.12, right=0.95, hspace=0.05, top=0.95, bottom=0.1)
    ax = plt.subplot(gs0[0])
    ax.minorticks_on()
    ax.tick_params(length=20, width=1, which='major', direction='in', right=True, top=True)
    ax.tick_params(length=10, width=1, which='minor', direction='in', right=True, top=True)
    plt.plot(t, data[:, 1] / mb, color='grey', alpha=0.6, label='RSS')
    plt.plot(t, data[:, 3] / mb, color='black', linewidth=2, label='RSS moving average')
    plt.ylabel('Memory [MB]', fontsize=22)
    if title is not None:
        plt.title(title, fontsize=22)
    plt.legend(fontsize=16)
    ax.set_xticklabels([])
    ax2 = plt.subplot(gs0[1])
    ax2.minorticks_on()
    ax2.tick_params(length=20, width=1, which='major', direction='in', right=True, top=True)
    ax2.tick_params(length=10, width=1, which='minor', direction='in', right=True, top=True)
    plt.plot(t, data[:, 2], color='grey', alpha=0.6, label='CPU')
    plt.plot(t, data[:, 4], color='blue', linewidth=2, label='CPU moving average')
    plt.xlabel('Time [s]', fontsize=22)
    plt.ylabel('CPU [%]', fontsize=22)
    plt.legend(fontsize=16)
    for item in (ax.get_yticklabels() + ax2.get_xticklabels() + ax2.get_yticklabels()):
        item.set_fontsize(14)
    if outfile is not None:
        plt.savefig(outfile)
        plt.close(fig)
    else:
        plt.show()

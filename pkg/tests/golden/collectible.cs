using UnityEngine;

public class CoinPickup : MonoBehaviour
{
    public int value = 1;

    private void OnTriggerEnter(Collider other)
    {
        if (!other.CompareTag("Player"))
        {
            return;
        }
        OnCollect();
    }

    public void OnCollect()
    {
        if (GameManager.Instance != null)
        {
            GameManager.Instance.AddScore(value);
        }
        gameObject.SetActive(false);
    }
}
